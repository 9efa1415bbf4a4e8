#include "hst/tree.hpp"

#include <stdexcept>

namespace hst {

BinaryTree BinaryTree::trusted(std::vector<NodeId> left, std::vector<NodeId> right) {
    BinaryTree t;
    t.left_ = std::move(left);
    t.right_ = std::move(right);
    return t;
}

BinaryTree::BinaryTree(std::vector<NodeId> left, std::vector<NodeId> right)
    : left_(std::move(left)), right_(std::move(right)) {
    if (left_.empty() || left_.size() != right_.size())
        throw std::invalid_argument("child arrays must have equal length n+1");
    size_t n = size();
    if (left_[0] != 0 || right_[0] != 0) throw std::invalid_argument("slot 0 must be empty");
    // walk in preorder; the k-th visited node must carry id k
    std::vector<NodeId> stack;
    if (n) stack.push_back(1);
    NodeId expect = 1;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        if (v != expect || v > n) throw std::invalid_argument("nodes are not numbered in preorder");
        ++expect;
        if (right_[v]) stack.push_back(right_[v]);
        if (left_[v]) stack.push_back(left_[v]);
    }
    if (expect != n + 1) throw std::invalid_argument("child arrays do not form one tree");
}

OrdinalTree::OrdinalTree(const std::vector<std::vector<NodeId>>& children) {
    if (children.empty()) throw std::invalid_argument("children table needs slot 0 for roots");
    size_t n = children.size() - 1;
    std::vector<NodeId> parent(n + 1, 0);
    std::vector<bool> seen(n + 1, false);
    for (size_t v = 0; v <= n; ++v)
        for (NodeId c : children[v]) {
            if (c == 0 || c > n || seen[c]) throw std::invalid_argument("bad child id");
            seen[c] = true;
            parent[c] = NodeId(v);
        }
    for (size_t v = 1; v <= n; ++v)
        if (!seen[v]) throw std::invalid_argument("node without parent slot");
    OrdinalTree f = from_parents(parent);
    // from_parents orders siblings by id; the given order must agree
    for (size_t v = 0; v <= n; ++v) {
        if (children[v].size() != f.degree(NodeId(v))) throw std::invalid_argument("bad child lists");
        for (size_t i = 0; i < children[v].size(); ++i)
            if (children[v][i] != f.child(NodeId(v), i))
                throw std::invalid_argument("children not in preorder");
    }
    *this = std::move(f);
}

OrdinalTree OrdinalTree::from_parents(const std::vector<NodeId>& parent) {
    if (parent.empty() || parent[0] != 0) throw std::invalid_argument("parent table needs slot 0 = 0");
    size_t n = parent.size() - 1;
    OrdinalTree f;
    f.parent_ = parent;
    f.start_.assign(n + 2, 0);
    for (size_t v = 1; v <= n; ++v) {
        if (parent[v] >= v) throw std::invalid_argument("parent must precede child in preorder");
        ++f.start_[parent[v] + 1];
    }
    for (size_t v = 1; v <= n + 1; ++v) f.start_[v] += f.start_[v - 1];
    f.kids_.assign(n, 0);
    std::vector<size_t> fill(f.start_.begin(), f.start_.end() - 1);
    for (size_t v = 1; v <= n; ++v) f.kids_[fill[parent[v]]++] = NodeId(v);
    // preorder check: each child follows the previous sibling's whole subtree
    std::vector<uint32_t> sz = subtree_sizes(f);
    for (size_t v = 0; v <= n; ++v) {
        NodeId expect = NodeId(v) + 1;
        for (const NodeId* c = f.children_begin(NodeId(v)); c != f.children_end(NodeId(v)); ++c) {
            if (*c != expect) throw std::invalid_argument("nodes are not numbered in preorder");
            expect += sz[*c];
        }
    }
    return f;
}

namespace {

// BP of the forest given by a preorder-numbered parent table
BitBuf bp_from_parents(const std::vector<NodeId>& parent) {
    BitBuf out;
    std::vector<NodeId> open;
    for (NodeId v = 1; v < parent.size(); ++v) {
        while (!open.empty() && open.back() != parent[v]) {
            out.push_bit(false);
            open.pop_back();
        }
        out.push_bit(true);
        open.push_back(v);
    }
    for (size_t i = 0; i < open.size(); ++i) out.push_bit(false);
    return out;
}

}  // namespace

BitBuf bp_encode(const BinaryTree& t) {
    // the binary BP is the forest BP of the inverse first-child next-sibling image
    std::vector<NodeId> parent(t.size() + 1, 0);
    for (NodeId v = 1; v <= t.size(); ++v)
        for (NodeId c = t.left(v); c; c = t.right(c)) parent[c] = v;
    return bp_from_parents(parent);
}

BitBuf bp_encode(const OrdinalTree& f) {
    std::vector<NodeId> parent(f.size() + 1, 0);
    for (NodeId v = 1; v <= f.size(); ++v) parent[v] = f.parent(v);
    return bp_from_parents(parent);
}

BinaryTree bp_decode_binary(BitReader& in, size_t n) {
    if (in.remaining() < 2 * n) throw MalformedStream("BP truncated");
    std::vector<NodeId> left(n + 1, 0), right(n + 1, 0), open;
    NodeId next = 1, lastClosed = 0;
    bool prevOpen = false;
    for (size_t i = 0; i < 2 * n; ++i) {
        if (in.read_bit()) {
            if (next > n) throw MalformedStream("BP has too many nodes");
            NodeId v = next++;
            if (prevOpen)
                left[open.back()] = v;
            else if (lastClosed)
                right[lastClosed] = v;
            else if (v != 1)
                throw MalformedStream("BP is not a single binary tree");
            open.push_back(v);
            prevOpen = true;
        } else {
            if (open.empty()) throw MalformedStream("BP closes an unopened node");
            lastClosed = open.back();
            open.pop_back();
            prevOpen = false;
        }
    }
    if (!open.empty() || next != n + 1) throw MalformedStream("BP is unbalanced");
    return BinaryTree::trusted(std::move(left), std::move(right));
}

OrdinalTree bp_decode_ordinal(BitReader& in, size_t n) {
    if (in.remaining() < 2 * n) throw MalformedStream("BP truncated");
    std::vector<NodeId> parent(n + 1, 0), open;
    NodeId next = 1;
    for (size_t i = 0; i < 2 * n; ++i) {
        if (in.read_bit()) {
            if (next > n) throw MalformedStream("BP has too many nodes");
            parent[next] = open.empty() ? 0 : open.back();
            open.push_back(next++);
        } else {
            if (open.empty()) throw MalformedStream("BP closes an unopened node");
            open.pop_back();
        }
    }
    if (!open.empty() || next != n + 1) throw MalformedStream("BP is unbalanced");
    return OrdinalTree::from_parents(parent);
}

namespace {

BitBuf bits_from_parens(const std::string& s) {
    BitBuf b;
    for (char c : s) {
        if (c == '(')
            b.push_bit(true);
        else if (c == ')')
            b.push_bit(false);
        else if (c == '\r' || c == ' ' || c == '\t')
            continue;
        else
            throw MalformedInput(std::string("unexpected character '") + c + "' in BP string");
    }
    if (b.size() % 2) throw MalformedInput("BP string has odd length");
    return b;
}

std::string parens_from_bits(const BitBuf& b) {
    std::string s(b.size(), ')');
    for (size_t i = 0; i < b.size(); ++i)
        if (b.get(i)) s[i] = '(';
    return s;
}

}  // namespace

std::string bp_string(const BinaryTree& t) { return parens_from_bits(bp_encode(t)); }
std::string bp_string(const OrdinalTree& f) { return parens_from_bits(bp_encode(f)); }

BinaryTree parse_binary_bp(const std::string& s) {
    BitBuf b = bits_from_parens(s);
    BitReader r(b);
    return bp_decode_binary(r, b.size() / 2);
}

OrdinalTree parse_ordinal_bp(const std::string& s) {
    BitBuf b = bits_from_parens(s);
    BitReader r(b);
    return bp_decode_ordinal(r, b.size() / 2);
}

BinaryTree fcns(const OrdinalTree& f) {
    size_t n = f.size();
    std::vector<NodeId> left(n + 1, 0), right(n + 1, 0);
    for (NodeId v = 0; v <= n; ++v) {
        size_t d = f.degree(v);
        if (d == 0) continue;
        const NodeId* c = f.children_begin(v);
        if (v) left[v] = c[0];
        for (size_t i = 0; i + 1 < d; ++i) right[c[i]] = c[i + 1];
    }
    return BinaryTree::trusted(std::move(left), std::move(right));
}

OrdinalTree fcns_inverse(const BinaryTree& t) {
    size_t n = t.size();
    std::vector<NodeId> parent(n + 1, 0);
    for (NodeId v = 1; v <= n; ++v) {
        // left child starts v's child list; right pointers chain siblings
        for (NodeId c = t.left(v); c; c = t.right(c)) parent[c] = v;
    }
    return OrdinalTree::from_parents(parent);
}

std::vector<uint32_t> subtree_sizes(const BinaryTree& t) {
    size_t n = t.size();
    std::vector<uint32_t> sz(n + 1, 0);
    for (size_t v = n; v >= 1; --v) sz[v] = 1 + sz[t.left(NodeId(v))] + sz[t.right(NodeId(v))];
    return sz;
}

std::vector<uint32_t> subtree_sizes(const OrdinalTree& f) {
    size_t n = f.size();
    std::vector<uint32_t> sz(n + 1, 1);
    sz[0] = 0;
    for (size_t v = n; v >= 1; --v) sz[f.parent(NodeId(v))] += sz[v];
    sz[0] = uint32_t(n);
    return sz;
}

Annotations annotate(const BinaryTree& t) {
    size_t n = t.size();
    Annotations a;
    a.subtreeSize.assign(n + 1, 0);
    a.height.assign(n + 1, 0);
    a.depth.assign(n + 1, 0);
    a.nodeType.assign(n + 1, kLeaf);
    a.degree.assign(n + 1, 0);
    a.inorderRank.assign(n + 1, 0);
    for (size_t v = n; v >= 1; --v) {
        NodeId l = t.left(NodeId(v)), r = t.right(NodeId(v));
        a.subtreeSize[v] = 1 + a.subtreeSize[l] + a.subtreeSize[r];
        a.height[v] = 1 + std::max(a.height[l], a.height[r]);
        a.degree[v] = uint8_t((l != 0) + (r != 0));
        a.nodeType[v] = l && r ? kBinary : l ? kLeftUnary : r ? kRightUnary : kLeaf;
    }
    // first inorder rank inside each subtree, pushed down in preorder
    std::vector<uint32_t> first(n + 1, 0);
    if (n) first[1] = 1;
    for (NodeId v = 1; v <= n; ++v) {
        NodeId l = t.left(v), r = t.right(v);
        a.inorderRank[v] = first[v] + a.subtreeSize[l];
        if (l) {
            first[l] = first[v];
            a.depth[l] = a.depth[v] + 1;
        }
        if (r) {
            first[r] = a.inorderRank[v] + 1;
            a.depth[r] = a.depth[v] + 1;
        }
    }
    return a;
}

std::vector<NodeId> inorder_sequence(const BinaryTree& t) {
    Annotations a = annotate(t);
    std::vector<NodeId> seq(t.size() + 1, 0);
    for (NodeId v = 1; v <= t.size(); ++v) seq[a.inorderRank[v]] = v;
    return seq;
}

}  // namespace hst
