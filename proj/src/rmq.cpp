#include "hst/rmq.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hst {

BinaryTree cartesian_tree(const std::vector<int64_t>& A) {
    size_t n = A.size();
    if (n == 0) throw std::invalid_argument("Cartesian tree of an empty array");
    // children by array position (1-based); equal values stay on the stack, so later ones go right
    std::vector<uint32_t> L(n + 1, 0), R(n + 1, 0), st;
    for (uint32_t k = 1; k <= n; ++k) {
        uint32_t last = 0;
        while (!st.empty() && A[st.back() - 1] > A[k - 1]) {
            last = st.back();
            st.pop_back();
        }
        L[k] = last;
        if (!st.empty()) R[st.back()] = k;
        st.push_back(k);
    }
    std::vector<NodeId> id(n + 1, 0), left(n + 1, 0), right(n + 1, 0);
    std::vector<uint32_t> order, dfs{st.front()};
    NodeId next = 1;
    while (!dfs.empty()) {
        uint32_t x = dfs.back();
        dfs.pop_back();
        id[x] = next++;
        order.push_back(x);
        if (R[x]) dfs.push_back(R[x]);
        if (L[x]) dfs.push_back(L[x]);
    }
    for (uint32_t x : order) {
        if (L[x]) left[id[x]] = id[L[x]];
        if (R[x]) right[id[x]] = id[R[x]];
    }
    return BinaryTree::trusted(std::move(left), std::move(right));
}

RMQIndex::RMQIndex(const std::vector<int64_t>& A, std::optional<size_t> B)
    : blob_(hs_encode_binary(cartesian_tree(A), B)), nav_(blob_) {}

RMQIndex::RMQIndex(HsBlob blob) : blob_(std::move(blob)), nav_(blob_) {}

uint64_t RMQIndex::query(uint64_t i, uint64_t j) const {
    if (i < 1 || j > nav_.size() || i > j) throw std::out_of_range("bad query interval");
    if (i == j) return i;
    return nav_.inorder_rank(nav_.lca(nav_.inorder_select(i), nav_.inorder_select(j)));
}

namespace {
double lg_binom(double n, double k) {
    return (std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1)) / std::log(2.0);
}
}  // namespace

double lg_narayana(uint64_t n, uint64_t r) {
    if (r < 1 || r > n) throw std::invalid_argument("Narayana number needs 1 <= r <= n");
    return lg_binom(double(n), double(r)) + lg_binom(double(n), double(r - 1)) - std::log2(double(n));
}

RunsProfile runs_profile(const std::vector<int64_t>& A) {
    RunsProfile p;
    p.n = A.size();
    if (p.n == 0) return p;
    size_t runLen = 1;
    p.r = 1;
    for (size_t k = 1; k < p.n; ++k) {
        if (A[k] < A[k - 1]) {
            p.s += runLen == 1;
            ++p.r;
            runLen = 1;
        } else {
            ++runLen;
        }
    }
    p.s += runLen == 1;
    p.boundBits = 2 * lg_binom(double(p.n), double(p.r));
    p.narayanaBits = lg_narayana(p.n, p.r);
    return p;
}

std::string bp_inorder_variant(const BinaryTree& t) {
    std::string out;
    out.reserve(2 * t.size());
    // frames: node, phase (0 = before left, 1 = after left, 2 = after right)
    std::vector<std::pair<NodeId, int>> st;
    if (t.size()) st.push_back({t.root(), 0});
    while (!st.empty()) {
        auto& [v, phase] = st.back();
        NodeId x = v;
        if (phase == 0) {
            phase = 1;
            if (t.left(x)) st.push_back({t.left(x), 0});
        } else if (phase == 1) {
            phase = 2;
            out.push_back('(');
            if (t.right(x)) st.push_back({t.right(x), 0});
        } else {
            out.push_back(')');
            st.pop_back();
        }
    }
    return out;
}

size_t dyck_peaks(const std::string& bp) {
    int64_t depth = 0;
    size_t peaks = 0;
    for (size_t k = 0; k < bp.size(); ++k) {
        if (bp[k] == '(') {
            ++depth;
            if (k + 1 < bp.size() && bp[k + 1] == ')') ++peaks;
        } else if (bp[k] == ')') {
            if (--depth < 0) throw MalformedInput("unbalanced parentheses");
        } else {
            throw MalformedInput("unexpected character in parentheses string");
        }
    }
    if (depth != 0) throw MalformedInput("unbalanced parentheses");
    return peaks;
}

size_t dyck_peaks(const BitBuf& bp) {
    std::string s;
    s.reserve(bp.size());
    for (size_t k = 0; k < bp.size(); ++k) s.push_back(bp.get(k) ? '(' : ')');
    return dyck_peaks(s);
}

std::vector<int64_t> parse_array(const std::string& text) {
    std::istringstream in(text);
    std::vector<int64_t> A;
    std::string tok;
    while (in >> tok) {
        size_t used = 0;
        int64_t x;
        try {
            x = std::stoll(tok, &used);
        } catch (const std::exception&) {
            throw MalformedInput("not a 64-bit integer: " + tok);
        }
        if (used != tok.size()) throw MalformedInput("not a 64-bit integer: " + tok);
        A.push_back(x);
    }
    return A;
}

}  // namespace hst
