#include "hst/bits.hpp"

namespace hst {

void BitBuf::push_bits(uint64_t v, unsigned width) {
    for (unsigned k = width; k-- > 0;) push_bit((v >> k) & 1u);
}

void BitBuf::append(const BitBuf& other) {
    if ((len_ & 7) == 0) {
        bytes_.insert(bytes_.end(), other.bytes_.begin(), other.bytes_.end());
        len_ += other.len_;
        return;
    }
    for (size_t i = 0; i < other.len_; ++i) push_bit(other.get(i));
}

uint64_t BitBuf::get_bits(size_t pos, unsigned width) const {
    uint64_t v = 0;
    for (unsigned k = 0; k < width; ++k) v = (v << 1) | uint64_t(get(pos + k));
    return v;
}

std::string BitBuf::to_string() const {
    std::string s(len_, '0');
    for (size_t i = 0; i < len_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

BitBuf BitBuf::from_string(const std::string& s) {
    BitBuf b;
    for (char c : s) {
        if (c != '0' && c != '1') throw std::invalid_argument("bit string must be 0/1");
        b.push_bit(c == '1');
    }
    return b;
}

BitBuf BitBuf::from_bytes(std::vector<uint8_t> bytes, size_t len) {
    if (len > bytes.size() * 8) throw MalformedStream("bit length exceeds byte payload");
    bytes.resize((len + 7) / 8);
    if (len & 7) bytes.back() &= uint8_t(0xFFu << (8 - (len & 7)));
    BitBuf b;
    b.bytes_ = std::move(bytes);
    b.len_ = len;
    return b;
}

bool BitBuf::operator==(const BitBuf& o) const {
    return len_ == o.len_ && bytes_ == o.bytes_;
}

uint64_t BitReader::read_bits(unsigned width) {
    if (width > remaining()) throw MalformedStream("bit stream truncated");
    uint64_t v = buf_->get_bits(pos_, width);
    pos_ += width;
    return v;
}

void gamma_encode(BitBuf& out, uint64_t n) {
    if (n == 0) throw std::invalid_argument("Elias gamma is undefined for 0");
    unsigned l = floor_lg(n);
    for (unsigned i = 0; i < l; ++i) out.push_bit(false);
    out.push_bits(n, l + 1);
}

uint64_t gamma_decode(BitReader& in) {
    unsigned zeros = 0;
    while (!in.read_bit()) {
        if (++zeros > 63) throw MalformedStream("gamma codeword too long");
    }
    uint64_t v = 1;
    for (unsigned i = 0; i < zeros; ++i) v = (v << 1) | uint64_t(in.read_bit());
    return v;
}

VarCellArray::VarCellArray(const std::vector<BitBuf>& cells) : count_(cells.size()) {
    size_t nb = (count_ + kBlock - 1) / kBlock;
    blockStart_.reserve(nb + 1);
    blockLocalStart_.reserve(count_);
    uint64_t base = 0;
    for (size_t i = 0; i < count_; ++i) {
        if (i % kBlock == 0) {
            base = payload_.size();
            blockStart_.push_back(base);
        }
        uint64_t local = payload_.size() - base;
        if (local > UINT32_MAX) throw std::length_error("cell block exceeds 2^32 bits");
        blockLocalStart_.push_back(uint32_t(local));
        payload_.append(cells[i]);
    }
    blockStart_.push_back(payload_.size());
}

size_t VarCellArray::offset_of(size_t i) const {
    if (i == count_) return payload_.size();
    return blockStart_[i / kBlock] + blockLocalStart_[i];
}

VarCellArray::Cell VarCellArray::access(size_t i) const {
    if (i >= count_) throw std::out_of_range("VarCellArray index out of range");
    size_t off = offset_of(i);
    return {off, offset_of(i + 1) - off};
}

BitBuf VarCellArray::cell(size_t i) const {
    Cell c = access(i);
    BitBuf b;
    for (size_t k = 0; k < c.length; ++k) b.push_bit(payload_.get(c.offset + k));
    return b;
}

size_t VarCellArray::directory_bits() const {
    return blockStart_.size() * 64 + blockLocalStart_.size() * 32;
}

}  // namespace hst
