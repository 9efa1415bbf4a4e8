#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "hst/sources.hpp"
#include "source_tables.hpp"

namespace hst {

namespace {

constexpr uint64_t kFull = uint64_t(1) << 62;
constexpr uint64_t kHalf = kFull >> 1;
constexpr uint64_t kQuarter = kFull >> 2;
constexpr uint64_t kScale = uint64_t(1) << 32;  // total frequency of scaled tables
constexpr size_t kTableSourceCap = 4096;

class Encoder {
public:
    explicit Encoder(BitBuf& out) : out_(out) {}

    void encode(uint64_t lo, uint64_t hi, uint64_t total) {
        unsigned __int128 range = (unsigned __int128)(high_ - low_) + 1;
        high_ = low_ + uint64_t(range * hi / total) - 1;
        low_ = low_ + uint64_t(range * lo / total);
        while (true) {
            if (high_ < kHalf) {
                emit(false);
            } else if (low_ >= kHalf) {
                emit(true);
                low_ -= kHalf;
                high_ -= kHalf;
            } else if (low_ >= kQuarter && high_ < kHalf + kQuarter) {
                ++pending_;
                low_ -= kQuarter;
                high_ -= kQuarter;
            } else {
                break;
            }
            low_ <<= 1;
            high_ = (high_ << 1) | 1;
        }
    }

    void finish() {
        ++pending_;
        emit(low_ >= kQuarter);
    }

private:
    void emit(bool b) {
        out_.push_bit(b);
        for (; pending_; --pending_) out_.push_bit(!b);
    }

    BitBuf& out_;
    uint64_t low_ = 0, high_ = kFull - 1;
    uint64_t pending_ = 0;
};

class Decoder {
public:
    explicit Decoder(BitReader& in) : in_(in), start_(in.pos()) {
        for (int i = 0; i < 62; ++i) value_ = (value_ << 1) | next();
    }

    // scaled target in [0, total)
    uint64_t target(uint64_t total) const {
        unsigned __int128 range = (unsigned __int128)(high_ - low_) + 1;
        return uint64_t(((unsigned __int128)(value_ - low_ + 1) * total - 1) / range);
    }

    void consume(uint64_t lo, uint64_t hi, uint64_t total) {
        unsigned __int128 range = (unsigned __int128)(high_ - low_) + 1;
        high_ = low_ + uint64_t(range * hi / total) - 1;
        low_ = low_ + uint64_t(range * lo / total);
        while (true) {
            if (high_ < kHalf) {
            } else if (low_ >= kHalf) {
                low_ -= kHalf;
                high_ -= kHalf;
                value_ -= kHalf;
            } else if (low_ >= kQuarter && high_ < kHalf + kQuarter) {
                low_ -= kQuarter;
                high_ -= kQuarter;
                value_ -= kQuarter;
            } else {
                break;
            }
            low_ <<= 1;
            high_ = (high_ << 1) | 1;
            value_ = (value_ << 1) | next();
            ++shifts_;
        }
    }

    // the encoder wrote one bit per shift plus two at the end
    void finish() {
        size_t end = start_ + shifts_ + 2;
        if (end > in_.buf().size()) throw MalformedStream("arithmetic code truncated");
        in_.seek(end);
    }

private:
    uint64_t next() { return in_.peek_bit_or_zero(cursor_++ + start_) ? 1 : 0; }

    BitReader& in_;
    size_t start_;
    size_t cursor_ = 0;
    size_t shifts_ = 0;
    uint64_t low_ = 0, high_ = kFull - 1, value_ = 0;
};

// cumulative frequency table over symbols 0..k-1
struct Table {
    std::vector<uint64_t> cum;  // size k + 1
    uint64_t total() const { return cum.back(); }
};

// lg-probabilities scaled to a 2^32 total; every possible symbol keeps frequency >= 1
Table from_lg(const std::vector<double>& lgp) {
    Table t;
    t.cum.assign(1, 0);
    for (double x : lgp) {
        uint64_t f = std::isinf(x) ? 0 : std::max<uint64_t>(1, uint64_t(std::floor(std::exp2(x + 32))));
        t.cum.push_back(t.cum.back() + f);
    }
    return t;
}

Table from_exact(const std::vector<BigInt>& w) {
    Table t;
    t.cum.assign(1, 0);
    for (const BigInt& x : w) t.cum.push_back(t.cum.back() + x.convert_to<uint64_t>());
    return t;
}

// left-size table for a fixed-size family at subtree size n; nullopt for the closed-form ones
Table split_table(const SourceModel& s, uint64_t n) {
    std::vector<BigInt> exact;
    BigInt total;
    switch (s.family) {
        case Family::kUniform:
            total = catalan(n);
            if (total <= kScale)
                for (uint64_t l = 0; l < n; ++l) exact.push_back(catalan(l) * catalan(n - 1 - l));
            break;
        case Family::kFringeBalanced:
            if (n >= 2 * uint64_t(s.t) + 1) {
                total = binom_big(n, 2 * uint64_t(s.t) + 1);
                if (total <= kScale)
                    for (uint64_t l = 0; l < n; ++l) exact.push_back(binom_big(l, s.t) * binom_big(n - 1 - l, s.t));
            }
            break;
        case Family::kWeightBalanced: {
            const auto& w = wb_table(n, s.wbNum, s.wbDen);
            total = w[n];
            if (total <= kScale)
                for (uint64_t l = 0; l < n; ++l)
                    exact.push_back(wb_ok(l, n - 1 - l, s.wbNum, s.wbDen) ? w[l] * w[n - 1 - l] : BigInt(0));
            break;
        }
        default: break;
    }
    if (!exact.empty()) return from_exact(exact);
    std::vector<double> p;
    for (uint64_t l = 0; l < n; ++l) p.push_back(lg_split_prob(s, l, n - 1 - l));
    return from_lg(p);
}

Table height_table(const SourceModel& s, unsigned h) {
    // T_5 = 108675 is the last count below 2^32
    bool small = h <= 5;
    std::vector<BigInt> exact;
    std::vector<double> p;
    for (unsigned idx = 0; idx + 1 < 2 * h; ++idx) {
        auto [i, j] = height_pair_from_index(h, idx);
        if (small) {
            const auto& T = avl_height_table(h);
            exact.push_back(i + 1 >= j && j + 1 >= i ? T[i] * T[j] : BigInt(0));
        }
        p.push_back(lg_height_pair_prob(s, i, j));
    }
    return small ? from_exact(exact) : from_lg(p);
}

struct Interval {
    uint64_t lo, hi, total;
};

// the coding interval of left size l at subtree size n
class SplitCoder {
public:
    explicit SplitCoder(const SourceModel& s) : s_(s) {}

    Interval interval(uint64_t n, uint64_t l) {
        switch (s_.family) {
            case Family::kBst: return {l, l + 1, n};
            case Family::kAlmostPath: {
                uint64_t K = s_.K;
                if (n <= 2 * (K + 1)) return {l, l + 1, n};
                uint64_t r = n - 1 - l;
                if (l <= K) return {l, l + 1, 2 * K + 2};
                if (r <= K) {
                    uint64_t idx = K + 1 + (K - r);
                    return {idx, idx + 1, 2 * K + 2};
                }
                return {0, 0, 1};
            }
            default: {
                const Table& t = table(n);
                return {t.cum[l], t.cum[l + 1], t.total()};
            }
        }
    }

    uint64_t decode(Decoder& d, uint64_t n) {
        switch (s_.family) {
            case Family::kBst: {
                uint64_t l = d.target(n);
                d.consume(l, l + 1, n);
                return l;
            }
            case Family::kAlmostPath: {
                uint64_t K = s_.K;
                if (n <= 2 * (K + 1)) {
                    uint64_t l = d.target(n);
                    d.consume(l, l + 1, n);
                    return l;
                }
                uint64_t idx = d.target(2 * K + 2);
                d.consume(idx, idx + 1, 2 * K + 2);
                return idx <= K ? idx : n - 1 - (K - (idx - K - 1));
            }
            default: {
                const Table& t = table(n);
                uint64_t v = d.target(t.total());
                uint64_t l = uint64_t(std::upper_bound(t.cum.begin(), t.cum.end(), v) - t.cum.begin()) - 1;
                d.consume(t.cum[l], t.cum[l + 1], t.total());
                return l;
            }
        }
    }

private:
    const Table& table(uint64_t n) {
        auto it = cache_.find(n);
        if (it == cache_.end()) it = cache_.emplace(n, split_table(s_, n)).first;
        return it->second;
    }

    const SourceModel& s_;
    std::unordered_map<uint64_t, Table> cache_;
};

std::vector<uint32_t> heights_of(const BinaryTree& t) {
    std::vector<uint32_t> h(t.size() + 1, 0);
    for (NodeId v = NodeId(t.size()); v >= 1; --v) h[v] = 1 + std::max(h[t.left(v)], h[t.right(v)]);
    return h;
}

void check_codable(const SourceModel& s, size_t n) {
    if (s.kind != SourceKind::kFixedSize && s.kind != SourceKind::kFixedHeight &&
        s.family != Family::kWeightBalanced)
        throw std::invalid_argument("no depth-first arithmetic code for source " + s.name);
    bool closed = s.family == Family::kBst || s.family == Family::kAlmostPath;
    if (!closed && s.kind != SourceKind::kFixedHeight && n > kTableSourceCap)
        throw std::invalid_argument("arithmetic coding with " + s.name + " is limited to n <= " +
                                    std::to_string(kTableSourceCap));
}

}  // namespace

BitBuf dfs_arith_encode(const SourceModel& s, const BinaryTree& t) {
    size_t n = t.size();
    check_codable(s, n);
    BitBuf out;
    if (s.kind == SourceKind::kFixedHeight) {
        auto h = heights_of(t);
        gamma_encode(out, uint64_t(h[t.root()]) + 1);
        if (n == 0) return out;
        std::unordered_map<unsigned, Table> cache;
        Encoder enc(out);
        for (NodeId v = 1; v <= n; ++v) {
            unsigned H = h[v], i = h[t.left(v)], j = h[t.right(v)];
            auto it = cache.find(H);
            if (it == cache.end()) it = cache.emplace(H, height_table(s, H)).first;
            unsigned idx = height_pair_index(i, j);
            const Table& tb = it->second;
            if (tb.cum[idx] == tb.cum[idx + 1]) throw std::invalid_argument("tree has probability 0 under " + s.name);
            enc.encode(tb.cum[idx], tb.cum[idx + 1], tb.total());
        }
        enc.finish();
        return out;
    }
    gamma_encode(out, n + 1);
    if (n == 0) return out;
    auto sz = subtree_sizes(t);
    SplitCoder coder(s);
    Encoder enc(out);
    for (NodeId v = 1; v <= n; ++v) {
        Interval iv = coder.interval(sz[v], sz[t.left(v)]);
        if (iv.lo == iv.hi) throw std::invalid_argument("tree has probability 0 under " + s.name);
        enc.encode(iv.lo, iv.hi, iv.total);
    }
    enc.finish();
    return out;
}

BinaryTree dfs_arith_decode(const SourceModel& s, BitReader& in) {
    uint64_t head = gamma_decode(in);
    if (head == 0) throw MalformedStream("bad size header");
    uint64_t param = head - 1;
    if (s.kind == SourceKind::kFixedHeight) {
        if (param > 64) throw MalformedStream("height out of range");
        if (param == 0) return BinaryTree();
        std::unordered_map<unsigned, Table> cache;
        Decoder dec(in);
        BinaryTree t = grow_binary(param, [&](uint64_t hh) -> std::pair<uint64_t, uint64_t> {
            unsigned H = unsigned(hh);
            auto it = cache.find(H);
            if (it == cache.end()) it = cache.emplace(H, height_table(s, H)).first;
            const Table& tb = it->second;
            uint64_t v = dec.target(tb.total());
            unsigned idx = unsigned(std::upper_bound(tb.cum.begin(), tb.cum.end(), v) - tb.cum.begin()) - 1;
            dec.consume(tb.cum[idx], tb.cum[idx + 1], tb.total());
            return height_pair_from_index(H, idx);
        });
        dec.finish();
        return t;
    }
    if (param > (uint64_t(1) << 32)) throw MalformedStream("size out of range");
    check_codable(s, param);
    if (param == 0) return BinaryTree();
    SplitCoder coder(s);
    Decoder dec(in);
    BinaryTree t = grow_binary(param, [&](uint64_t n) -> std::pair<uint64_t, uint64_t> {
        uint64_t l = coder.decode(dec, n);
        return {l, n - 1 - l};
    });
    dec.finish();
    return t;
}

}  // namespace hst
