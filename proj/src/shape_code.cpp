#include "hst/shape_code.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace hst {

std::vector<uint32_t> huffman_lengths(const std::vector<uint64_t>& weights) {
    size_t k = weights.size();
    if (k == 0) return {};
    if (k == 1) return {1};
    // (weight, tie-break id); internal nodes get ids >= k
    using Item = std::pair<uint64_t, uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    std::vector<uint32_t> parent(2 * k - 1, 0);
    for (uint32_t i = 0; i < k; ++i) pq.push({weights[i], i});
    uint32_t next = uint32_t(k);
    while (pq.size() > 1) {
        Item a = pq.top();
        pq.pop();
        Item b = pq.top();
        pq.pop();
        parent[a.second] = next;
        parent[b.second] = next;
        pq.push({a.first + b.first, next++});
    }
    // internal ids grow toward the root, so depths fill in from the top down
    uint32_t root = next - 1;
    std::vector<uint32_t> depth(2 * k - 1, 0);
    for (uint32_t v = root; v-- > 0;) depth[v] = depth[parent[v]] + 1;
    return std::vector<uint32_t>(depth.begin(), depth.begin() + long(k));
}

void ShapeCode::assign_codewords() {
    size_t k = alphabet.size();
    codeword.assign(k, 0);
    index_.clear();
    uint32_t maxLen = 0;
    for (uint32_t l : codeLen) maxLen = std::max(maxLen, l);
    if (maxLen > 64) throw MalformedStream("codeword longer than 64 bits");
    firstCode_.assign(maxLen + 2, 0);
    firstIndex_.assign(maxLen + 2, 0);
    countAt_.assign(maxLen + 2, 0);
    uint64_t code = 0;
    uint32_t prev = 0;
    // canonical assignment; overflow means the lengths violate Kraft
    unsigned __int128 used = 0;  // sum of 2^(64-len)
    for (size_t i = 0; i < k; ++i) {
        uint32_t l = codeLen[i];
        if (l == 0 || l < prev) throw MalformedStream("code lengths not in canonical order");
        if (i > 0) code = (code + 1) << (l - prev);
        if (countAt_[l] == 0) {
            firstCode_[l] = code;
            firstIndex_[l] = uint32_t(i);
        }
        ++countAt_[l];
        codeword[i] = code;
        used += (unsigned __int128)1 << (64 - l);
        if (used > ((unsigned __int128)1 << 64)) throw MalformedStream("code lengths violate Kraft");
        prev = l;
        if (!index_.emplace(alphabet[i], uint32_t(i)).second) throw MalformedStream("shape listed twice");
    }
}

int64_t ShapeCode::index_of(const std::string& bp) const {
    auto it = index_.find(bp);
    return it == index_.end() ? -1 : int64_t(it->second);
}

BitBuf ShapeCode::codeword_bits(size_t i) const {
    BitBuf b;
    b.push_bits(codeword[i], codeLen[i]);
    return b;
}

size_t ShapeCode::decode(BitReader& in) const {
    uint64_t code = 0;
    for (uint32_t l = 1; l < countAt_.size(); ++l) {
        code = (code << 1) | uint64_t(in.read_bit());
        if (countAt_[l] && code >= firstCode_[l] && code - firstCode_[l] < countAt_[l])
            return firstIndex_[l] + size_t(code - firstCode_[l]);
    }
    throw MalformedStream("unknown codeword");
}

double ShapeCode::kraft_sum() const {
    double s = 0;
    for (uint32_t l : codeLen) s += std::ldexp(1.0, -int(l));
    return s;
}

ShapeCode build_shape_code(const std::vector<std::string>& shapes) {
    std::unordered_map<std::string, uint32_t> id;
    std::vector<std::string> distinct;
    std::vector<uint64_t> freq;
    for (const auto& s : shapes) {
        auto [it, fresh] = id.emplace(s, uint32_t(distinct.size()));
        if (fresh) {
            distinct.push_back(s);
            freq.push_back(0);
        }
        ++freq[it->second];
    }
    std::vector<uint32_t> lens = huffman_lengths(freq);
    std::vector<uint32_t> order(distinct.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        return lens[a] != lens[b] ? lens[a] < lens[b] : distinct[a] < distinct[b];
    });
    ShapeCode c;
    for (uint32_t i : order) {
        c.alphabet.push_back(distinct[i]);
        c.codeLen.push_back(lens[i]);
        c.freq.push_back(freq[i]);
    }
    c.assign_codewords();
    return c;
}

ShapeCode shape_code_from_lengths(std::vector<std::string> alphabet, std::vector<uint32_t> codeLen) {
    ShapeCode c;
    for (size_t i = 1; i < alphabet.size(); ++i)
        if (codeLen[i] == codeLen[i - 1] && !(alphabet[i - 1] < alphabet[i]))
            throw MalformedStream("codebook not in canonical order");
    c.alphabet = std::move(alphabet);
    c.codeLen = std::move(codeLen);
    c.freq.assign(c.alphabet.size(), 0);
    c.assign_codewords();
    return c;
}

size_t escape_length(size_t shapeSize) { return gamma_length(shapeSize + 1) + 2 * shapeSize; }

BitBuf restrict_codeword(const BitBuf* huffman, const std::string& bp) {
    size_t s = bp.size() / 2;
    BitBuf out;
    if (huffman && huffman->size() <= 2 * s + 2 * size_t(floor_lg(s + 1))) {
        out.push_bit(true);
        out.append(*huffman);
        return out;
    }
    out.push_bit(false);
    gamma_encode(out, s + 1);
    for (char ch : bp) out.push_bit(ch == '(');
    return out;
}

BitBuf restrict(const ShapeCode& code, const std::string& bp) {
    int64_t i = code.index_of(bp);
    if (i < 0) return restrict_codeword(nullptr, bp);
    BitBuf cw = code.codeword_bits(size_t(i));
    return restrict_codeword(&cw, bp);
}

}  // namespace hst
