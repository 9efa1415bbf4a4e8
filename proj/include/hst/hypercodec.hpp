#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hst/bits.hpp"
#include "hst/cover.hpp"
#include "hst/shape_code.hpp"
#include "hst/shape_info.hpp"
#include "hst/tree.hpp"

namespace hst {

enum class TreeKind : uint8_t { kBinary = 0, kOrdinal = 1 };

struct HsBlob {
    TreeKind kind = TreeKind::kBinary;
    BitBuf bits;
};

struct SpaceReport {
    size_t n = 0, m = 0, B = 0;
    size_t header = 0;
    size_t topTierBP = 0;
    size_t codebook = 0;
    size_t codewords = 0;     // restricted codewords as stored
    size_t portals = 0;
    size_t edgeTypes = 0;     // ordinal only
    size_t unrestricted = 0;  // sum of plain Huffman codeword lengths
    size_t total = 0;
};

HsBlob hs_encode_binary(const BinaryTree& t, std::optional<size_t> B = std::nullopt, SpaceReport* report = nullptr);
BinaryTree hs_decode_binary(const HsBlob& blob);
HsBlob hs_encode_ordinal(const OrdinalTree& t, std::optional<size_t> B = std::nullopt, SpaceReport* report = nullptr);
OrdinalTree hs_decode_ordinal(const HsBlob& blob);

SpaceReport space_report(const BinaryTree& t, std::optional<size_t> B = std::nullopt);
SpaceReport space_report(const OrdinalTree& t, std::optional<size_t> B = std::nullopt);

// .hst container: "HST1", kind byte, bitstream padded with zeros to a byte
std::vector<uint8_t> blob_to_bytes(const HsBlob& blob);
HsBlob blob_from_bytes(const std::vector<uint8_t>& bytes);

// Parsed binary blob without the assembled tree; shared by the decoder and navigation.
struct BinaryBlobView {
    size_t n = 0, m = 0, mu = 0;
    BinaryTree top;
    ShapeCode code;
    std::vector<BinaryShapeInfo> shapes;  // distinct micro shapes
    std::vector<uint32_t> shapeOf;        // micro -> index into shapes
    std::vector<int32_t> leftPortal, rightPortal;  // null rank or -1
    std::vector<size_t> codewordStart;    // m+1 bit offsets of the restricted codewords
};
BinaryBlobView parse_binary_blob(const HsBlob& blob);

// Global placement of each micro tree in the decoded tree (1-based ranks).
struct BinaryLayout {
    std::vector<uint64_t> rootPre;    // preorder rank of the micro root
    std::vector<uint64_t> inStart;    // inorder rank of the first node of the micro root's subtree
    std::vector<uint64_t> total;      // nodes in the micro root's subtree
    std::vector<uint64_t> leftSize;   // nodes hanging at the left portal
    std::vector<uint64_t> rightSize;  // nodes hanging at the right portal
};
BinaryLayout layout_binary(const BinaryBlobView& v);

}  // namespace hst
