#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hst/bits.hpp"

namespace hst {

// Canonical Huffman code over micro-tree shapes, shapes named by their BP text.
struct ShapeCode {
    std::vector<std::string> alphabet;  // canonical order: (codeLen, BP text)
    std::vector<uint32_t> codeLen;
    std::vector<uint64_t> codeword;  // right-aligned, codeLen bits
    std::vector<uint64_t> freq;      // zero when rebuilt from lengths only

    // -1 when the shape does not occur
    int64_t index_of(const std::string& bp) const;
    BitBuf codeword_bits(size_t i) const;
    // reads one codeword, returns its alphabet index
    size_t decode(BitReader& in) const;
    double kraft_sum() const;
    size_t size() const { return alphabet.size(); }

    // assigns canonical codewords; alphabet/codeLen must already be in canonical order
    void assign_codewords();

private:
    std::unordered_map<std::string, uint32_t> index_;
    std::vector<uint64_t> firstCode_;  // per length
    std::vector<uint32_t> firstIndex_, countAt_;
};

ShapeCode build_shape_code(const std::vector<std::string>& shapes);
// for decoders: canonical-order alphabet with lengths
ShapeCode shape_code_from_lengths(std::vector<std::string> alphabet, std::vector<uint32_t> codeLen);

// Huffman lengths for the given weights (all positive); a single symbol gets length 1
std::vector<uint32_t> huffman_lengths(const std::vector<uint64_t>& weights);

// bits of the escape body: gamma(|s|+1) followed by the BP of the shape
size_t escape_length(size_t shapeSize);
// 1.C(s) if the codeword is no longer than the escape body, else 0.gamma(|s|+1).BP(s);
// `huffman` may be null for shapes outside the alphabet
BitBuf restrict_codeword(const BitBuf* huffman, const std::string& bp);
BitBuf restrict(const ShapeCode& code, const std::string& bp);

}  // namespace hst
