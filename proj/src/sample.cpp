#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "hst/sources.hpp"
#include "source_tables.hpp"

namespace hst {

namespace {

constexpr size_t kTableCap = 2000;  // big-integer weighted sampling is quadratic in n

BinaryTree remy(size_t n, std::mt19937_64& rng) {
    if (n == 0) return BinaryTree();
    const uint32_t none = UINT32_MAX;
    std::vector<uint32_t> c0(2 * n + 1, none), c1(2 * n + 1, none), par(2 * n + 1, none);
    uint32_t root = 0;
    for (size_t k = 1; k <= n; ++k) {
        uint32_t x = uint32_t(std::uniform_int_distribution<size_t>(0, 2 * k - 2)(rng));
        uint32_t y = uint32_t(2 * k - 1), z = uint32_t(2 * k);
        uint32_t p = par[x];
        if (p == none)
            root = y;
        else
            (c0[p] == x ? c0[p] : c1[p]) = y;
        par[y] = p;
        bool side = rng() & 1;
        (side ? c1[y] : c0[y]) = x;
        (side ? c0[y] : c1[y]) = z;
        par[x] = par[z] = y;
    }
    // keep internal nodes only
    std::vector<uint32_t> L(2 * n + 1, none), R(2 * n + 1, none);
    for (uint32_t v = 0; v <= 2 * n; ++v) {
        if (c0[v] == none) continue;
        if (c0[c0[v]] != none) L[v] = c0[v];
        if (c0[c1[v]] != none) R[v] = c1[v];
    }
    return renumber_preorder(root, L, R, none);
}

// k distinct values from [0, n), Floyd's algorithm
std::vector<uint64_t> floyd_sample(uint64_t n, uint64_t k, std::mt19937_64& rng) {
    std::unordered_set<uint64_t> s;
    for (uint64_t j = n - k; j < n; ++j) {
        uint64_t x = std::uniform_int_distribution<uint64_t>(0, j)(rng);
        s.insert(s.count(x) ? j : x);
    }
    return {s.begin(), s.end()};
}

uint64_t choose_left_size(const SourceModel& s, uint64_t n, std::mt19937_64& rng) {
    switch (s.family) {
        case Family::kBst: return std::uniform_int_distribution<uint64_t>(0, n - 1)(rng);
        case Family::kBinomial: return std::binomial_distribution<uint64_t>(n - 1, s.alpha)(rng);
        case Family::kAlmostPath: {
            uint64_t K = s.K;
            if (n <= 2 * (K + 1)) return std::uniform_int_distribution<uint64_t>(0, n - 1)(rng);
            uint64_t x = std::uniform_int_distribution<uint64_t>(0, 2 * K + 1)(rng);
            return x <= K ? x : n - 1 - (x - K - 1);
        }
        case Family::kFringeBalanced: {
            uint64_t k = 2 * uint64_t(s.t) + 1;
            if (n < k) return std::uniform_int_distribution<uint64_t>(0, n - 1)(rng);
            auto v = floyd_sample(n, k, rng);
            std::nth_element(v.begin(), v.begin() + s.t, v.end());
            return v[s.t];
        }
        case Family::kWeightBalanced: {
            const auto& w = wb_table(n, s.wbNum, s.wbDen);
            BigInt x = uniform_below(w[n], rng);
            for (uint64_t l = 0; l < n; ++l) {
                if (!wb_ok(l, n - 1 - l, s.wbNum, s.wbDen)) continue;
                BigInt c = w[l] * w[n - 1 - l];
                if (x < c) return l;
                x -= c;
            }
            break;
        }
        default: break;
    }
    throw std::logic_error("no left-size sampler for " + s.name);
}

// exact weighted choice over a list of big-integer weights summing to `total`
template <class Items, class WeightOf>
size_t weighted_index(const Items& items, WeightOf weight, const BigInt& total, std::mt19937_64& rng) {
    BigInt x = uniform_below(total, rng);
    for (size_t i = 0; i < items.size(); ++i) {
        BigInt c = weight(items[i]);
        if (x < c) return i;
        x -= c;
    }
    throw std::logic_error("weighted choice ran past the total");
}

BinaryTree sample_avl_size(size_t n, std::mt19937_64& rng) {
    const auto& a = avl_size_table(n);
    if (n == 0) return BinaryTree();
    // root height
    std::vector<std::pair<unsigned, BigInt>> hs(a[n].begin(), a[n].end());
    unsigned h0 = hs[weighted_index(hs, [](const auto& p) { return p.second; }, count_avl_size(n), rng)].first;
    // parameters packed as size * 64 + height
    return grow_binary(uint64_t(n) * 64 + h0, [&](uint64_t param) -> std::pair<uint64_t, uint64_t> {
        uint64_t s = param / 64;
        unsigned h = unsigned(param % 64);
        struct Opt {
            uint64_t l;
            unsigned hl, hr;
            BigInt w;
        };
        std::vector<Opt> opts;
        for (uint64_t l = 0; l < s; ++l) {
            uint64_t r = s - 1 - l;
            for (const auto& [hl, cl] : a[l])
                for (const auto& [hr, cr] : a[r])
                    if (std::max(hl, hr) + 1 == h && hl <= hr + 1 && hr <= hl + 1) opts.push_back({l, hl, hr, cl * cr});
        }
        const Opt& o = opts[weighted_index(opts, [](const Opt& x) { return x.w; }, a[s].at(h), rng)];
        uint64_t r = s - 1 - o.l;
        return {o.l ? o.l * 64 + o.hl : 0, r ? r * 64 + o.hr : 0};
    });
}

BinaryTree sample_llrb(size_t n, std::mt19937_64& rng) {
    const auto& cnt = llrb_table(n);
    if (n == 0) return BinaryTree();
    std::vector<std::pair<uint64_t, BigInt>> roots;
    for (const auto& [p, c] : cnt[n])
        if (llrb_root_ok(p)) roots.push_back({p, c});
    uint64_t p0 = roots[weighted_index(roots, [](const auto& x) { return x.second; }, count_llrb(n), rng)].first;
    // pending parameters index into a side table of (size, profile)
    std::vector<std::pair<uint64_t, uint64_t>> slots{{0, 0}, {n, p0}};
    return grow_binary(1, [&](uint64_t param) -> std::pair<uint64_t, uint64_t> {
        auto [s, p] = slots[param];
        struct Opt {
            uint64_t l, pl, pr;
            BigInt w;
        };
        std::vector<Opt> opts;
        for (uint64_t l = 0; l < s; ++l)
            for (const auto& [pl, cl] : cnt[l])
                for (const auto& [pr, cr] : cnt[s - 1 - l])
                    if (llrb_combine(pl, pr) == p) opts.push_back({l, pl, pr, cl * cr});
        const Opt& o = opts[weighted_index(opts, [](const Opt& x) { return x.w; }, cnt[s].at(p), rng)];
        uint64_t r = s - 1 - o.l;
        uint64_t a = 0, b = 0;
        if (o.l) {
            a = slots.size();
            slots.push_back({o.l, o.pl});
        }
        if (r) {
            b = slots.size();
            slots.push_back({r, o.pr});
        }
        return {a, b};
    });
}

BinaryTree sample_avl_height(unsigned h, const SourceModel& s, std::mt19937_64& rng) {
    return grow_binary(h, [&](uint64_t hh) -> std::pair<uint64_t, uint64_t> {
        unsigned H = unsigned(hh);
        std::vector<double> w;
        for (unsigned idx = 0; idx + 1 < 2 * H; ++idx) {
            auto [i, j] = height_pair_from_index(H, idx);
            w.push_back(height_pair_prob(s, i, j));
        }
        unsigned idx = unsigned(std::discrete_distribution<unsigned>(w.begin(), w.end())(rng));
        auto [i, j] = height_pair_from_index(H, idx);
        return {i, j};
    });
}

constexpr size_t kMaxAttempts = 1000000;

BinaryTree sample_type_process(const SourceModel& s, size_t cap, std::mt19937_64& rng) {
    uint64_t mod = s.tau.size();
    std::vector<std::discrete_distribution<int>> dist;
    for (const auto& d : s.tau) dist.emplace_back(d.begin(), d.end());
    for (size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::vector<NodeId> left(1, 0), right(1, 0);
        struct Pending {
            uint64_t z;
            NodeId parent;
            bool isRight;
        };
        std::vector<Pending> st{{0, 0, false}};
        bool over = false;
        while (!st.empty()) {
            if (left.size() > cap) {
                over = true;
                break;
            }
            Pending p = st.back();
            st.pop_back();
            NodeId id = NodeId(left.size());
            left.push_back(0);
            right.push_back(0);
            if (p.parent) (p.isRight ? right : left)[p.parent] = id;
            int ty = dist[p.z](rng);
            if (ty == 0) continue;
            uint64_t child = mod == 1 ? 0 : (p.z * 3 + uint64_t(ty - 1)) % mod;
            if (ty == 2 || ty == 3) st.push_back({child, id, true});
            if (ty == 1 || ty == 2) st.push_back({child, id, false});
        }
        if (!over) return BinaryTree::trusted(std::move(left), std::move(right));
    }
    throw EmptyClassError("type process produced no tree within the size cap");
}

template <class ChildSizes>
OrdinalTree grow_ordinal(size_t n, ChildSizes parts) {
    std::vector<NodeId> parent(1, 0);
    struct Pending {
        uint64_t size;
        NodeId parent;
    };
    std::vector<Pending> st{{n, 0}};
    while (!st.empty()) {
        Pending p = st.back();
        st.pop_back();
        NodeId id = NodeId(parent.size());
        parent.push_back(p.parent);
        std::vector<uint64_t> c = parts(p.size);
        for (size_t i = c.size(); i-- > 0;) st.push_back({c[i], id});
    }
    return OrdinalTree::from_parents(parent);
}

OrdinalTree sample_degree(const SourceModel& s, size_t cap, std::mt19937_64& rng) {
    std::discrete_distribution<size_t> dist(s.degree.begin(), s.degree.end());
    for (size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::vector<NodeId> parent(1, 0);
        std::vector<NodeId> st{0};
        bool over = false;
        while (!st.empty()) {
            if (parent.size() > cap) {
                over = true;
                break;
            }
            NodeId p = st.back();
            st.pop_back();
            NodeId id = NodeId(parent.size());
            parent.push_back(p);
            size_t d = dist(rng);
            for (size_t i = 0; i < d; ++i) st.push_back(id);
        }
        if (!over) return OrdinalTree::from_parents(parent);
    }
    throw EmptyClassError("degree process produced no tree within the size cap");
}

}  // namespace

BinaryTree sample_binary(const SourceModel& s, size_t target, std::mt19937_64& rng) {
    if (!s.binary()) throw std::invalid_argument("source " + s.name + " generates ordinal trees");
    switch (s.family) {
        case Family::kTypeProcess: return sample_type_process(s, target, rng);
        case Family::kUniform: return remy(target, rng);
        case Family::kAvlHeight:
            if (target > 64) throw std::invalid_argument("avl-height sampling is limited to h <= 64");
            return sample_avl_height(unsigned(target), s, rng);
        case Family::kAvlSize:
        case Family::kLlrb:
        case Family::kWeightBalanced:
            if (target > kTableCap)
                throw std::invalid_argument(s.name + " sampling is limited to n <= " + std::to_string(kTableCap));
            if (count_subclass(s, target) == 0) throw EmptyClassError(s.name + " has no tree of size " + std::to_string(target));
            if (s.family == Family::kAvlSize) return sample_avl_size(target, rng);
            if (s.family == Family::kLlrb) return sample_llrb(target, rng);
            break;
        default: break;
    }
    return grow_binary(target, [&](uint64_t n) -> std::pair<uint64_t, uint64_t> {
        uint64_t l = choose_left_size(s, n, rng);
        return {l, n - 1 - l};
    });
}

OrdinalTree sample_ordinal(const SourceModel& s, size_t target, std::mt19937_64& rng) {
    if (s.binary()) throw std::invalid_argument("source " + s.name + " generates binary trees");
    if (s.kind == SourceKind::kDegree) return sample_degree(s, target, rng);
    if (target == 0) throw std::invalid_argument("ordinal trees have at least one node");
    if (s.family == Family::kComposition)
        return grow_ordinal(target, [&](uint64_t n) {
            std::vector<uint64_t> parts;
            uint64_t sum = n - 1, cur = 0;
            for (uint64_t i = 0; i < sum; ++i) {
                ++cur;
                if (i + 1 == sum || (rng() & 1)) {
                    parts.push_back(cur);
                    cur = 0;
                }
            }
            return parts;
        });
    // prefix sums chosen top-down: S_{j-1} uniform below S_j
    return grow_ordinal(target, [&](uint64_t n) {
        std::vector<uint64_t> parts;
        uint64_t S = n - 1;
        while (S > 0) {
            uint64_t prev = std::uniform_int_distribution<uint64_t>(0, S - 1)(rng);
            parts.push_back(S - prev);
            S = prev;
        }
        std::reverse(parts.begin(), parts.end());
        return parts;
    });
}

}  // namespace hst
