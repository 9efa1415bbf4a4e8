#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hst/errors.hpp"

namespace hst {

// Append-only bit string, MSB-first inside each byte.
class BitBuf {
public:
    BitBuf() = default;

    void push_bit(bool b) {
        if ((len_ & 7) == 0) bytes_.push_back(0);
        if (b) bytes_.back() |= uint8_t(0x80u >> (len_ & 7));
        ++len_;
    }
    // low `width` bits of v, most significant first
    void push_bits(uint64_t v, unsigned width);
    void append(const BitBuf& other);

    bool get(size_t i) const {
        return (bytes_[i >> 3] >> (7 - (i & 7))) & 1u;
    }
    uint64_t get_bits(size_t pos, unsigned width) const;

    size_t size() const { return len_; }
    bool empty() const { return len_ == 0; }
    const std::vector<uint8_t>& bytes() const { return bytes_; }

    std::string to_string() const;
    static BitBuf from_string(const std::string& s);
    // trailing pad bits beyond `len` are ignored
    static BitBuf from_bytes(std::vector<uint8_t> bytes, size_t len);

    bool operator==(const BitBuf& o) const;

private:
    std::vector<uint8_t> bytes_;
    size_t len_ = 0;
};

class BitReader {
public:
    explicit BitReader(const BitBuf& buf, size_t pos = 0) : buf_(&buf), pos_(pos) {}

    bool read_bit() {
        if (pos_ >= buf_->size()) throw MalformedStream("bit stream truncated");
        return buf_->get(pos_++);
    }
    uint64_t read_bits(unsigned width);
    // past the end reads as zero; used by the arithmetic decoder lookahead
    bool peek_bit_or_zero(size_t i) const { return i < buf_->size() && buf_->get(i); }

    size_t pos() const { return pos_; }
    void seek(size_t p) { pos_ = p; }
    size_t remaining() const { return buf_->size() - pos_; }
    const BitBuf& buf() const { return *buf_; }

private:
    const BitBuf* buf_;
    size_t pos_;
};

// floor(lg n), n >= 1
inline unsigned floor_lg(uint64_t n) { return 63u - unsigned(__builtin_clzll(n)); }
// number of bits needed to write v in binary (0 for v = 0)
inline unsigned bit_width_of(uint64_t v) { return v == 0 ? 0 : floor_lg(v) + 1; }

void gamma_encode(BitBuf& out, uint64_t n);
uint64_t gamma_decode(BitReader& in);
inline size_t gamma_length(uint64_t n) { return 2 * size_t(floor_lg(n)) + 1; }

// Random access into the concatenation of variable-length bit cells.
// Offsets are split into a per-block absolute start and a narrow in-block delta.
class VarCellArray {
public:
    static constexpr size_t kBlock = 64;

    VarCellArray() = default;
    explicit VarCellArray(const std::vector<BitBuf>& cells);

    struct Cell {
        size_t offset;
        size_t length;
    };
    Cell access(size_t i) const;
    BitBuf cell(size_t i) const;

    size_t count() const { return count_; }
    size_t total_bits() const { return payload_.size(); }
    const BitBuf& payload() const { return payload_; }
    // bits spent on the offset directory
    size_t directory_bits() const;

private:
    size_t offset_of(size_t i) const;

    BitBuf payload_;
    size_t count_ = 0;
    std::vector<uint64_t> blockStart_;
    std::vector<uint32_t> blockLocalStart_;
};

}  // namespace hst
