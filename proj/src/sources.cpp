#include "hst/sources.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include "source_tables.hpp"

namespace hst {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lg_binom(double n, double k) {
    return (std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1)) / std::log(2.0);
}

double lg_catalan(double n) { return lg_binom(2 * n, n) - std::log2(n + 1); }

}  // namespace

double lg_big(const BigInt& x) {
    if (x <= 0) return -kInf;
    unsigned bits = unsigned(boost::multiprecision::msb(x));
    unsigned shift = bits > 60 ? bits - 60 : 0;
    BigInt top = x >> shift;
    return std::log2(top.convert_to<double>()) + shift;
}

BigInt binom_big(uint64_t n, uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

BigInt uniform_below(const BigInt& bound, std::mt19937_64& rng) {
    unsigned bits = unsigned(boost::multiprecision::msb(bound)) + 1;
    BigInt mask = (BigInt(1) << bits) - 1;
    while (true) {
        BigInt x = 0;
        for (unsigned k = 0; k < bits; k += 64) x = (x << 64) | BigInt(rng());
        x &= mask;
        if (x < bound) return x;
    }
}

BigInt catalan(size_t n) {
    static std::vector<BigInt> c{1};
    while (c.size() <= n) {
        size_t k = c.size();
        c.push_back(c.back() * 2 * (2 * k - 1) / (k + 1));
    }
    return c[n];
}

// ---------------------------------------------------------------- subclass counts

const std::vector<BigInt>& avl_height_table(unsigned h) {
    static std::vector<BigInt> T{1, 1};
    while (T.size() <= h) {
        size_t k = T.size();
        T.push_back(2 * T[k - 1] * T[k - 2] + T[k - 1] * T[k - 1]);
    }
    return T;
}

BigInt count_avl_height(unsigned h) { return avl_height_table(h)[h]; }

const std::vector<std::map<unsigned, BigInt>>& avl_size_table(size_t n) {
    static std::vector<std::map<unsigned, BigInt>> a{{{0u, BigInt(1)}}};
    while (a.size() <= n) {
        size_t s = a.size();
        std::map<unsigned, BigInt> cur;
        for (size_t l = 0; l < s; ++l) {
            size_t r = s - 1 - l;
            for (const auto& [hl, cl] : a[l])
                for (const auto& [hr, cr] : a[r])
                    if (hl <= hr + 1 && hr <= hl + 1) cur[std::max(hl, hr) + 1] += cl * cr;
        }
        a.push_back(std::move(cur));
    }
    return a;
}

BigInt count_avl_size(size_t n) {
    BigInt total = 0;
    for (const auto& [h, c] : avl_size_table(n)[n]) total += c;
    return total;
}

// Left-leaning red-black shapes. A profile is the set of (black height b, incoming colour c)
// under which a subtree admits a valid colouring, as bit 2b+c (c = 0 black, 1 red).
// Null edges count as black.
uint64_t llrb_combine(uint64_t pl, uint64_t pr) {
    uint64_t out = 0;
    // (left colour, right colour): both black, left red only, both red
    static const int pairs[3][2] = {{0, 0}, {1, 0}, {1, 1}};
    for (const auto& pc : pairs) {
        int cl = pc[0], cr = pc[1];
        for (unsigned bl = 0; bl < 32; ++bl) {
            if (!((pl >> (2 * bl + cl)) & 1)) continue;
            unsigned b = bl + (cl == 0);
            if (b < unsigned(cr == 0)) continue;
            unsigned br = b - (cr == 0);
            if (br >= 32 || !((pr >> (2 * br + cr)) & 1)) continue;
            if (b >= 32) continue;
            out |= uint64_t(1) << (2 * b);  // incoming black allows all three pairs
            if (cl == 0 && cr == 0) out |= uint64_t(1) << (2 * b + 1);
        }
    }
    return out;
}

bool llrb_root_ok(uint64_t p) { return (p & 0x5555555555555555ull) != 0; }

const std::vector<std::map<uint64_t, BigInt>>& llrb_table(size_t n) {
    static std::vector<std::map<uint64_t, BigInt>> cnt{{{uint64_t(1), BigInt(1)}}};
    static std::map<std::pair<uint64_t, uint64_t>, uint64_t> memo;
    while (cnt.size() <= n) {
        size_t s = cnt.size();
        std::map<uint64_t, BigInt> cur;
        for (size_t l = 0; l < s; ++l) {
            size_t r = s - 1 - l;
            for (const auto& [pl, cl] : cnt[l])
                for (const auto& [pr, cr] : cnt[r]) {
                    auto key = std::make_pair(pl, pr);
                    auto it = memo.find(key);
                    if (it == memo.end()) it = memo.emplace(key, llrb_combine(pl, pr)).first;
                    if (it->second) cur[it->second] += cl * cr;
                }
        }
        cnt.push_back(std::move(cur));
    }
    return cnt;
}

BigInt count_llrb(size_t n) {
    BigInt total = 0;
    for (const auto& [p, c] : llrb_table(n)[n])
        if (llrb_root_ok(p)) total += c;
    return total;
}

bool wb_ok(uint64_t l, uint64_t r, uint64_t num, uint64_t den) {
    unsigned __int128 need = (unsigned __int128)num * (l + r + 2);
    return (unsigned __int128)(l + 1) * den >= need && (unsigned __int128)(r + 1) * den >= need;
}

const std::vector<BigInt>& wb_table(size_t n, uint64_t num, uint64_t den) {
    static std::map<std::pair<uint64_t, uint64_t>, std::vector<BigInt>> all;
    auto& w = all[{num, den}];
    if (w.empty()) w.push_back(1);
    while (w.size() <= n) {
        size_t s = w.size();
        BigInt total = 0;
        for (size_t l = 0; l < s; ++l)
            if (wb_ok(l, s - 1 - l, num, den)) total += w[l] * w[s - 1 - l];
        w.push_back(total);
    }
    return w;
}

BigInt count_weight_balanced(size_t n, uint64_t num, uint64_t den) { return wb_table(n, num, den)[n]; }

BigInt count_subclass(const SourceModel& s, size_t param) {
    switch (s.family) {
        case Family::kAvlHeight: return count_avl_height(unsigned(param));
        case Family::kAvlSize: return count_avl_size(param);
        case Family::kLlrb: return count_llrb(param);
        case Family::kWeightBalanced: return count_weight_balanced(param, s.wbNum, s.wbDen);
        case Family::kUniform: return catalan(param);
        default: throw std::invalid_argument("not a uniform-subclass source: " + s.name);
    }
}

// ---------------------------------------------------------------- constructors

SourceModel type_process(unsigned k, std::vector<std::array<double, 4>> tau) {
    size_t need = 1;
    for (unsigned i = 0; i < k; ++i) need *= 3;
    if (tau.size() != need) throw std::invalid_argument("type process needs 3^k distributions");
    for (const auto& d : tau) {
        double sum = 0;
        for (double x : d) {
            if (!(x >= 0)) throw std::invalid_argument("negative type probability");
            sum += x;
        }
        if (std::abs(sum - 1) > 1e-9) throw std::invalid_argument("type probabilities must sum to 1");
    }
    SourceModel s;
    s.kind = SourceKind::kTypeProcess;
    s.family = Family::kTypeProcess;
    s.order = k;
    s.tau = std::move(tau);
    s.name = "type-process:" + std::to_string(k);
    return s;
}

SourceModel memoryless(double q0, double q1, double q2, double q3) {
    SourceModel s = type_process(0, {{q0, q1, q2, q3}});
    std::ostringstream os;
    os << "memoryless:" << q0 << "," << q1 << "," << q2 << "," << q3;
    s.name = os.str();
    return s;
}

namespace {
SourceModel simple(SourceKind k, Family f, std::string name) {
    SourceModel s;
    s.kind = k;
    s.family = f;
    s.name = std::move(name);
    return s;
}
}  // namespace

SourceModel bst_source() { return simple(SourceKind::kFixedSize, Family::kBst, "bst"); }
SourceModel uniform_source() { return simple(SourceKind::kFixedSize, Family::kUniform, "uniform"); }
SourceModel binomial_source(double alpha) {
    if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("binomial alpha must be in (0,1)");
    SourceModel s = simple(SourceKind::kFixedSize, Family::kBinomial, "binomial");
    s.alpha = alpha;
    std::ostringstream os;
    os << "binomial:" << alpha;
    s.name = os.str();
    return s;
}
SourceModel almost_path_source(unsigned K) {
    SourceModel s = simple(SourceKind::kFixedSize, Family::kAlmostPath, "almostpath:" + std::to_string(K));
    s.K = K;
    return s;
}
SourceModel fringe_balanced_source(unsigned t) {
    SourceModel s = simple(SourceKind::kFixedSize, Family::kFringeBalanced, "fringebalanced:" + std::to_string(t));
    s.t = t;
    return s;
}
SourceModel weight_balanced_source(uint64_t num, uint64_t den) {
    if (den == 0 || 2 * num > den) throw std::invalid_argument("weight-balance alpha must be in [0, 1/2]");
    SourceModel s = simple(SourceKind::kUniformSubclass, Family::kWeightBalanced,
                           "wb:" + std::to_string(num) + "/" + std::to_string(den));
    s.wbNum = num;
    s.wbDen = den;
    return s;
}
SourceModel avl_height_source() { return simple(SourceKind::kFixedHeight, Family::kAvlHeight, "avl-height"); }
SourceModel avl_size_source() { return simple(SourceKind::kUniformSubclass, Family::kAvlSize, "avl-size"); }
SourceModel llrb_source() { return simple(SourceKind::kUniformSubclass, Family::kLlrb, "llrb"); }
SourceModel degree_source(std::vector<double> d) {
    double sum = 0;
    for (double x : d) {
        if (!(x >= 0)) throw std::invalid_argument("negative degree probability");
        sum += x;
    }
    if (d.empty() || !(d[0] > 0)) throw std::invalid_argument("degree distribution needs d0 > 0");
    if (std::abs(sum - 1) > 1e-9) throw std::invalid_argument("degree probabilities must sum to 1");
    SourceModel s = simple(SourceKind::kDegree, Family::kDegree, "degree");
    s.degree = std::move(d);
    return s;
}
SourceModel composition_source() { return simple(SourceKind::kOrdinalFixedSize, Family::kComposition, "composition"); }
SourceModel lrm_source() { return simple(SourceKind::kOrdinalFixedSize, Family::kLrm, "lrm"); }

SourceModel parse_source(const std::string& desc) {
    auto colon = desc.find(':');
    std::string head = desc.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : desc.substr(colon + 1);
    auto numbers = [&]() {
        std::vector<double> v;
        std::stringstream ss(arg);
        std::string item;
        while (std::getline(ss, item, ',')) {
            size_t used = 0;
            double x = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument("bad number in source descriptor: " + item);
            v.push_back(x);
        }
        return v;
    };
    auto need_arg = [&]() {
        if (arg.empty()) throw std::invalid_argument("source '" + head + "' needs a parameter");
    };
    try {
        if (head == "bst") return bst_source();
        if (head == "uniform") return uniform_source();
        if (head == "binomial") {
            need_arg();
            return binomial_source(numbers().at(0));
        }
        if (head == "almostpath") {
            need_arg();
            return almost_path_source(unsigned(std::stoul(arg)));
        }
        if (head == "fringebalanced") {
            need_arg();
            return fringe_balanced_source(unsigned(std::stoul(arg)));
        }
        if (head == "avl-size") return avl_size_source();
        if (head == "avl-height") return avl_height_source();
        if (head == "llrb") return llrb_source();
        if (head == "wb") {
            need_arg();
            auto slash = arg.find('/');
            if (slash == std::string::npos) throw std::invalid_argument("wb needs a fraction like 2/7");
            return weight_balanced_source(std::stoull(arg.substr(0, slash)), std::stoull(arg.substr(slash + 1)));
        }
        if (head == "motzkin") {
            SourceModel s = memoryless(1.0 / 3, 1.0 / 3, 1.0 / 3, 0);
            s.name = "motzkin";
            return s;
        }
        if (head == "memoryless") {
            need_arg();
            auto q = numbers();
            if (q.size() != 4) throw std::invalid_argument("memoryless needs four probabilities");
            return memoryless(q[0], q[1], q[2], q[3]);
        }
        if (head == "composition") return composition_source();
        if (head == "lrm") return lrm_source();
        if (head == "degree") {
            need_arg();
            return degree_source(numbers());
        }
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("bad source descriptor: " + desc);
    }
    throw std::invalid_argument("unknown source: " + desc);
}

// ---------------------------------------------------------------- probabilities

double lg_split_prob(const SourceModel& s, uint64_t l, uint64_t r) {
    uint64_t n = l + r + 1;
    switch (s.family) {
        case Family::kBst: return -std::log2(double(n));
        case Family::kUniform: return lg_catalan(double(l)) + lg_catalan(double(r)) - lg_catalan(double(n));
        case Family::kBinomial:
            return lg_binom(double(l + r), double(l)) + double(l) * std::log2(s.alpha) +
                   double(r) * std::log2(1 - s.alpha);
        case Family::kAlmostPath:
            if (l > s.K && r > s.K) return -kInf;
            return -std::log2(double(std::min<uint64_t>(n, 2 * (uint64_t(s.K) + 1))));
        case Family::kFringeBalanced: {
            if (n < 2 * uint64_t(s.t) + 1) return -std::log2(double(n));
            if (l < s.t || r < s.t) return -kInf;
            return lg_binom(double(l), s.t) + lg_binom(double(r), s.t) - lg_binom(double(n), 2.0 * s.t + 1);
        }
        case Family::kWeightBalanced: {
            const auto& w = wb_table(n, s.wbNum, s.wbDen);
            if (!wb_ok(l, r, s.wbNum, s.wbDen) || w[n] == 0) return -kInf;
            return lg_big(w[l]) + lg_big(w[r]) - lg_big(w[n]);
        }
        default: throw std::invalid_argument("not a fixed-size binary source: " + s.name);
    }
}

double split_prob(const SourceModel& s, uint64_t l, uint64_t r) { return std::exp2(lg_split_prob(s, l, r)); }

std::optional<Rational> split_prob_exact(const SourceModel& s, uint64_t l, uint64_t r) {
    uint64_t n = l + r + 1;
    switch (s.family) {
        case Family::kBst: return Rational(1, n);
        case Family::kUniform: return Rational(catalan(l) * catalan(r), catalan(n));
        case Family::kAlmostPath:
            if (l > s.K && r > s.K) return Rational(0);
            return n <= 2 * (uint64_t(s.K) + 1) ? Rational(1, n) : Rational(1, 2 * (uint64_t(s.K) + 1));
        case Family::kFringeBalanced:
            if (n < 2 * uint64_t(s.t) + 1) return Rational(1, n);
            return Rational(binom_big(l, s.t) * binom_big(r, s.t), binom_big(n, 2 * uint64_t(s.t) + 1));
        case Family::kWeightBalanced: {
            const auto& w = wb_table(n, s.wbNum, s.wbDen);
            if (!wb_ok(l, r, s.wbNum, s.wbDen) || w[n] == 0) return Rational(0);
            return Rational(w[l] * w[r], w[n]);
        }
        default: return std::nullopt;
    }
}

Rational height_pair_prob_exact(const SourceModel& s, unsigned i, unsigned j) {
    if (s.family != Family::kAvlHeight) throw std::invalid_argument("not a fixed-height source: " + s.name);
    if (i > j + 1 || j > i + 1) return Rational(0);
    unsigned h = std::max(i, j) + 1;
    const auto& T = avl_height_table(h);
    return Rational(T[i] * T[j], T[h]);
}

namespace {
// L[h] = lg T_h and D[h] = L[h-1] - L[h-2] in long double; all updates add non-negative terms,
// so nothing cancels even when T_h has billions of bits
struct AvlLogs {
    std::vector<long double> L{0, 0}, D{0, 0, 0};
    void grow(unsigned h) {
        while (L.size() <= h) {
            size_t k = L.size();  // L[k] = 2 L[k-1] + lg(1 + 2^(1 - D[k]))
            long double extra = std::log2(1.0L + std::exp2(1.0L - D[k]));
            L.push_back(2 * L[k - 1] + extra);
            D.push_back(L[k - 1] + extra);
        }
    }
};
}  // namespace

double lg_height_pair_prob(const SourceModel& s, unsigned i, unsigned j) {
    if (s.family != Family::kAvlHeight) throw std::invalid_argument("not a fixed-height source: " + s.name);
    if (i > j + 1 || j > i + 1) return -kInf;
    unsigned h = std::max(i, j) + 1;
    if (h == 1) return 0;
    if (h > 1000) throw std::invalid_argument("height out of range");
    static AvlLogs logs;
    logs.grow(h);
    // p(h-1,h-1) = 1 / (1 + 2 rho), p(h-2,h-1) = rho / (1 + 2 rho), rho = T_{h-2} / T_{h-1} = 2^-D[h]
    long double base = -std::log2(1.0L + std::exp2(1.0L - logs.D[h]));
    return double(i == j ? base : base - logs.D[h]);
}

double height_pair_prob(const SourceModel& s, unsigned i, unsigned j) {
    return std::exp2(lg_height_pair_prob(s, i, j));
}

unsigned height_pair_index(unsigned i, unsigned j) {
    unsigned h1 = std::max(i, j);  // = h - 1
    return j == h1 ? i : h1 + 1 + j;
}

std::pair<unsigned, unsigned> height_pair_from_index(unsigned h, unsigned idx) {
    unsigned h1 = h - 1;
    if (idx <= h1) return {idx, h1};
    return {h1, idx - h1 - 1};
}

double composition_prob(const SourceModel& s, const std::vector<uint64_t>& parts) {
    uint64_t sum = 0;
    for (uint64_t x : parts) sum += x;
    if (s.family == Family::kComposition) return sum == 0 ? 1.0 : std::exp2(-double(sum - 1));
    if (s.family == Family::kLrm) {
        double p = 1;
        uint64_t pre = 0;
        for (uint64_t x : parts) {
            pre += x;
            p /= double(pre);
        }
        return p;
    }
    throw std::invalid_argument("not an ordinal fixed-size source: " + s.name);
}

namespace {

// -lg of the composition probability, without underflow
double composition_bits(const SourceModel& s, const NodeId* b, const NodeId* e, const std::vector<uint32_t>& sz) {
    uint64_t sum = 0;
    double bits = 0;
    for (const NodeId* c = b; c != e; ++c) {
        sum += sz[*c];
        if (s.family == Family::kLrm) bits += std::log2(double(sum));
    }
    if (s.family == Family::kComposition) return sum == 0 ? 0.0 : double(sum - 1);
    return bits;
}

std::vector<uint32_t> heights(const BinaryTree& t) {
    std::vector<uint32_t> h(t.size() + 1, 0);
    for (NodeId v = NodeId(t.size()); v >= 1; --v) h[v] = 1 + std::max(h[t.left(v)], h[t.right(v)]);
    return h;
}

bool is_avl(const BinaryTree& t) {
    auto h = heights(t);
    for (NodeId v = 1; v <= t.size(); ++v) {
        uint32_t a = h[t.left(v)], b = h[t.right(v)];
        if (a > b + 1 || b > a + 1) return false;
    }
    return true;
}

bool is_llrb(const BinaryTree& t) {
    if (t.size() == 0) return true;
    std::vector<uint64_t> p(t.size() + 1, 1);
    p[0] = 1;
    for (NodeId v = NodeId(t.size()); v >= 1; --v) {
        p[v] = llrb_combine(p[t.left(v)], p[t.right(v)]);
        if (!p[v]) return false;
    }
    return llrb_root_ok(p[1]);
}

EntropyReport finish(double bits, size_t n) {
    EntropyReport r;
    r.logProbBits = bits;
    r.perNode = n ? bits / double(n) : 0.0;
    return r;
}

}  // namespace

uint32_t node_type(const BinaryTree& t, NodeId v) {
    bool l = t.left(v) != 0, r = t.right(v) != 0;
    return l && r ? 2 : l ? 1 : r ? 3 : 0;
}

std::vector<uint64_t> type_histories(const BinaryTree& t, unsigned k) {
    uint64_t mod = 1;
    for (unsigned i = 0; i < k; ++i) mod *= 3;
    std::vector<uint64_t> z(t.size() + 1, 0);
    for (NodeId v = 1; v <= t.size(); ++v) {
        uint64_t child = mod == 1 ? 0 : (z[v] * 3 + (node_type(t, v) - 1)) % mod;
        if (t.left(v)) z[t.left(v)] = child;
        if (t.right(v)) z[t.right(v)] = child;
    }
    return z;
}

EntropyReport log_prob(const SourceModel& s, const BinaryTree& t) {
    size_t n = t.size();
    if (!s.binary()) throw std::invalid_argument("source " + s.name + " generates ordinal trees");
    double bits = 0;
    switch (s.kind) {
        case SourceKind::kTypeProcess: {
            auto z = type_histories(t, s.order);
            for (NodeId v = 1; v <= n; ++v) {
                double q = s.tau[z[v]][node_type(t, v)];
                if (q <= 0) return finish(kInf, n);
                bits -= std::log2(q);
            }
            return finish(bits, n);
        }
        case SourceKind::kFixedHeight: {
            auto h = heights(t);
            for (NodeId v = 1; v <= n; ++v) {
                double q = lg_height_pair_prob(s, h[t.left(v)], h[t.right(v)]);
                if (std::isinf(q)) return finish(kInf, n);
                bits -= q;
            }
            return finish(bits, n);
        }
        case SourceKind::kUniformSubclass:
            if (s.family == Family::kAvlSize) {
                if (!is_avl(t)) return finish(kInf, n);
                return finish(lg_big(count_avl_size(n)), n);
            }
            if (s.family == Family::kLlrb) {
                if (!is_llrb(t)) return finish(kInf, n);
                return finish(lg_big(count_llrb(n)), n);
            }
            [[fallthrough]];
        case SourceKind::kFixedSize: {
            auto sz = subtree_sizes(t);
            for (NodeId v = 1; v <= n; ++v) {
                uint64_t l = sz[t.left(v)], r = sz[t.right(v)];
                if (s.family == Family::kBst) {
                    bits += std::log2(double(l + r + 1));
                    continue;
                }
                double q = lg_split_prob(s, l, r);
                if (std::isinf(q)) return finish(kInf, n);
                bits -= q;
            }
            return finish(bits, n);
        }
        default: break;
    }
    throw std::invalid_argument("source " + s.name + " has no binary-tree probability");
}

EntropyReport log_prob(const SourceModel& s, const OrdinalTree& t) {
    size_t n = t.size();
    if (s.binary()) throw std::invalid_argument("source " + s.name + " generates binary trees");
    double bits = 0;
    if (s.kind == SourceKind::kDegree) {
        for (NodeId v = 1; v <= n; ++v) {
            size_t d = t.degree(v);
            double q = d < s.degree.size() ? s.degree[d] : 0.0;
            if (q <= 0) return finish(kInf, n);
            bits -= std::log2(q);
        }
        return finish(bits, n);
    }
    auto sz = subtree_sizes(t);
    for (NodeId v = 1; v <= n; ++v) bits += composition_bits(s, t.children_begin(v), t.children_end(v), sz);
    return finish(bits, n);
}

// ---------------------------------------------------------------- empirical entropies

SourceModel empirical_type_process(const BinaryTree& t, unsigned k) {
    size_t states = 1;
    for (unsigned i = 0; i < k; ++i) states *= 3;
    std::vector<std::array<double, 4>> cnt(states, {0, 0, 0, 0});
    auto z = type_histories(t, k);
    for (NodeId v = 1; v <= t.size(); ++v) cnt[z[v]][node_type(t, v)] += 1;
    for (auto& c : cnt) {
        double tot = c[0] + c[1] + c[2] + c[3];
        if (tot == 0) {
            c = {1, 0, 0, 0};
            continue;
        }
        for (double& x : c) x /= tot;
    }
    return type_process(k, std::move(cnt));
}

namespace {
template <class Key>
double conditional_entropy(const std::unordered_map<Key, std::array<uint64_t, 4>>& cnt) {
    double h = 0;
    for (const auto& [z, c] : cnt) {
        uint64_t tot = c[0] + c[1] + c[2] + c[3];
        for (uint64_t x : c)
            if (x) h += double(x) * std::log2(double(tot) / double(x));
    }
    return h;
}
}  // namespace

double type_entropy(const BinaryTree& t, unsigned k) {
    if (k <= 39) {
        auto z = type_histories(t, k);
        std::unordered_map<uint64_t, std::array<uint64_t, 4>> cnt;
        for (NodeId v = 1; v <= t.size(); ++v) ++cnt[z[v]][node_type(t, v)];
        return conditional_entropy(cnt);
    }
    // long contexts: keep the last k digits as a string
    std::vector<std::string> z(t.size() + 1, std::string(k, '0'));
    std::unordered_map<std::string, std::array<uint64_t, 4>> cnt;
    for (NodeId v = 1; v <= t.size(); ++v) {
        uint32_t ty = node_type(t, v);
        ++cnt[z[v]][ty];
        if (ty == 0) continue;
        std::string c = z[v].substr(1) + char('0' + ty - 1);
        if (t.left(v)) z[t.left(v)] = c;
        if (t.right(v)) z[t.right(v)] = c;
    }
    return conditional_entropy(cnt);
}

double degree_entropy(const OrdinalTree& t) {
    std::unordered_map<size_t, uint64_t> nu;
    for (NodeId v = 1; v <= t.size(); ++v) ++nu[t.degree(v)];
    double h = 0, n = double(t.size());
    for (const auto& [d, c] : nu) h += double(c) * std::log2(n / double(c));
    return h;
}

double subtree_size_entropy(const BinaryTree& t) {
    auto sz = subtree_sizes(t);
    double h = 0;
    for (NodeId v = 1; v <= t.size(); ++v) h += std::log2(double(sz[v]));
    return h;
}

BinaryTree renumber_preorder(uint32_t root, const std::vector<uint32_t>& L, const std::vector<uint32_t>& R,
                             uint32_t none) {
    size_t cnt = L.size();
    std::vector<NodeId> id(cnt, 0);
    std::vector<NodeId> left(1, 0), right(1, 0);
    if (root == none) return BinaryTree();
    std::vector<uint32_t> st{root};
    std::vector<uint32_t> order;
    NodeId next = 1;
    while (!st.empty()) {
        uint32_t x = st.back();
        st.pop_back();
        id[x] = next++;
        order.push_back(x);
        if (R[x] != none) st.push_back(R[x]);
        if (L[x] != none) st.push_back(L[x]);
    }
    left.assign(next, 0);
    right.assign(next, 0);
    for (uint32_t x : order) {
        if (L[x] != none) left[id[x]] = id[L[x]];
        if (R[x] != none) right[id[x]] = id[R[x]];
    }
    return BinaryTree::trusted(std::move(left), std::move(right));
}

BinaryTree fcns_diamond(const OrdinalTree& t) {
    size_t n = t.size();
    // original nodes 0..n-1, fresh leaves after that
    const uint32_t none = UINT32_MAX;
    std::vector<uint32_t> L(n, none), R(n, none);
    auto leaf = [&]() {
        L.push_back(none);
        R.push_back(none);
        return uint32_t(L.size() - 1);
    };
    for (NodeId v = 0; v <= n; ++v) {
        const NodeId* b = t.children_begin(v);
        const NodeId* e = t.children_end(v);
        if (v > 0) L[v - 1] = b == e ? leaf() : *b - 1;
        for (const NodeId* c = b; c != e; ++c) R[*c - 1] = (c + 1 == e) ? leaf() : *(c + 1) - 1;
    }
    if (n == 0) {
        uint32_t x = leaf();
        return renumber_preorder(x, L, R, none);
    }
    return renumber_preorder(t.child(0, 0) - 1, L, R, none);
}

double shape_entropy(const OrdinalTree& t, unsigned k) {
    BinaryTree f = fcns_diamond(t);
    // shape history: directions from the root, padded with zeros, last k bits kept
    if (k < 64) {
        uint64_t mask = (uint64_t(1) << k) - 1;
        std::vector<uint64_t> z(f.size() + 1, 0);
        std::unordered_map<uint64_t, std::array<uint64_t, 4>> cnt;
        for (NodeId v = 1; v <= f.size(); ++v) {
            ++cnt[z[v]][f.left(v) ? 2 : 0];
            if (f.left(v)) z[f.left(v)] = (z[v] << 1) & mask;
            if (f.right(v)) z[f.right(v)] = ((z[v] << 1) | 1) & mask;
        }
        return conditional_entropy(cnt);
    }
    std::vector<std::string> z(f.size() + 1, std::string(k, '0'));
    std::unordered_map<std::string, std::array<uint64_t, 4>> cnt;
    for (NodeId v = 1; v <= f.size(); ++v) {
        ++cnt[z[v]][f.left(v) ? 2 : 0];
        if (f.left(v)) z[f.left(v)] = z[v].substr(1) + '0';
        if (f.right(v)) z[f.right(v)] = z[v].substr(1) + '1';
    }
    return conditional_entropy(cnt);
}

// ---------------------------------------------------------------- entropies of sources

double bst_entropy_closed_form(size_t n) {
    if (n == 0) return 0;
    double sum = 0;
    for (size_t i = 2; i + 1 <= n; ++i) sum += std::log2(double(i)) / (double(i + 2) * double(i + 1));
    return std::log2(double(n)) + 2.0 * double(n + 1) * sum;
}

double bst_entropy_limit() {
    // direct sum to N, then the tail by the midpoint integral of ln x / (x^2 ln 2)
    const size_t N = 2000000;
    long double sum = 0;
    for (size_t i = N; i >= 2; --i) sum += std::log2((long double)i) / ((long double)(i + 2) * (long double)(i + 1));
    long double a = (long double)N + 0.5L;
    long double tail = (std::log(a) + 1.0L) / (a * std::log(2.0L));
    return double(2 * (sum + tail));
}

void for_each_binary_tree(size_t n, const std::function<void(const BinaryTree&)>& f) {
    if (n == 0) {
        f(BinaryTree());
        return;
    }
    std::string w(2 * n, ' ');
    // iterative Dyck word generation: position, opens used
    std::function<void(size_t, size_t)> rec = [&](size_t pos, size_t open) {
        if (pos == 2 * n) {
            f(parse_binary_bp(w));
            return;
        }
        size_t closed = pos - open;
        if (open < n) {
            w[pos] = '(';
            rec(pos + 1, open + 1);
        }
        if (closed < open) {
            w[pos] = ')';
            rec(pos + 1, open);
        }
    };
    rec(0, 0);
}

namespace {
void for_each_ordinal_tree(size_t n, const std::function<void(const OrdinalTree&)>& f) {
    // a tree of n nodes = "(" + forest of n-1 nodes + ")"
    size_t m = n - 1;
    std::string w(2 * m, ' ');
    std::function<void(size_t, size_t)> rec = [&](size_t pos, size_t open) {
        if (pos == 2 * m) {
            f(parse_ordinal_bp("(" + w + ")"));
            return;
        }
        size_t closed = pos - open;
        if (open < m) {
            w[pos] = '(';
            rec(pos + 1, open + 1);
        }
        if (closed < open) {
            w[pos] = ')';
            rec(pos + 1, open);
        }
    };
    rec(0, 0);
}
}  // namespace

double source_entropy_exhaustive(const SourceModel& s, size_t n) {
    if (n > 14) throw std::invalid_argument("exhaustive entropy is limited to n <= 14");
    if (s.kind == SourceKind::kFixedHeight) {
        // chain rule over the pair choices: H_h = sum_pairs p (lg 1/p + H_i + H_j)
        std::vector<double> H(n + 1, 0.0);
        for (unsigned h = 1; h <= n; ++h)
            for (unsigned idx = 0; idx + 1 < 2 * h; ++idx) {
                auto [i, j] = height_pair_from_index(h, idx);
                double p = height_pair_prob(s, i, j);
                if (p > 0) H[h] += p * (-std::log2(p) + H[i] + H[j]);
            }
        return H[n];
    }
    if (s.kind == SourceKind::kTypeProcess || s.kind == SourceKind::kDegree)
        throw std::invalid_argument("source " + s.name + " has no fixed size");
    double h = 0;
    auto add = [&](double bits) {
        if (std::isfinite(bits)) h += std::exp2(-bits) * bits;
    };
    if (s.binary())
        for_each_binary_tree(n, [&](const BinaryTree& t) { add(log_prob(s, t).logProbBits); });
    else if (n >= 1)
        for_each_ordinal_tree(n, [&](const OrdinalTree& t) { add(log_prob(s, t).logProbBits); });
    return h;
}

double dfs_code_length(const SourceModel& s, const BinaryTree& t) {
    double lp = log_prob(s, t).logProbBits;
    if (!std::isfinite(lp)) return kInf;
    return lp + 2.0 * floor_lg(t.size() + 1) + 3.0;
}

}  // namespace hst
