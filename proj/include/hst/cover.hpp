#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hst/tree.hpp"

namespace hst {

// max(1, ceil(lg n / 8))
size_t default_block(size_t n);

struct BinaryMicroTree {
    std::vector<NodeId> nodes;  // global ids; nodes[j] is local preorder j
    BinaryTree shape;
    // local null-pointer rank where the left / right child in the top tier hangs, -1 if none
    int32_t leftPortal = -1;
    int32_t rightPortal = -1;
};

struct BinaryCover {
    size_t B = 1;
    std::vector<BinaryMicroTree> micro;  // depth-first order of the top tier
    BinaryTree top;                      // micro[i] is top-tier node i+1
};

enum EdgeType : uint8_t {
    kNewLeftmost = 0,
    kContinuedLeftmost = 1,
    kNewRightmost = 2,
    kContinuedRightmost = 3,
    kExternalChild = 4,
};

struct OrdinalMicroTree {
    std::vector<NodeId> nodes;  // global ids in local preorder
    OrdinalTree shape;
    bool sharedRoot = false;
    // where the external-edge children attach: local preorder index and child insertion rank
    int32_t portalPos = -1;
    int32_t portalRank = -1;
    EdgeType parentEdge = kNewRightmost;
};

struct OrdinalCover {
    size_t B = 1;
    std::vector<OrdinalMicroTree> micro;  // depth-first order of the top tier
    OrdinalTree top;                      // node 1 is the dummy root, micro[i] is node i+2
};

BinaryCover decompose_binary(const BinaryTree& t, size_t B);
OrdinalCover decompose_ordinal(const OrdinalTree& t, size_t B);

struct CoverStats {
    size_t m = 0;
    size_t heavyCount = 0;     // nodes v with |t[v]| >= B
    size_t maxLightTrees = 0;  // light nodes whose parent is heavy (or that are a light root)
};

struct CoverCheck {
    CoverStats stats;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

CoverCheck validate_cover(const BinaryTree& t, const BinaryCover& c);
CoverCheck validate_cover(const OrdinalTree& t, const OrdinalCover& c);

std::string dump_cover(const BinaryCover& c);
std::string dump_cover(const OrdinalCover& c);

}  // namespace hst
