#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hst/tree.hpp"

namespace hst {

// Per-shape lookup tables for a small binary tree. Local nodes are 0-based preorder
// indices; null pointers are ranked left to right.
struct BinaryShapeInfo {
    explicit BinaryShapeInfo(const BinaryTree& shape);

    size_t size() const { return in0.size(); }
    // preorder index of the least common ancestor of local nodes a and b
    uint32_t lca(uint32_t a, uint32_t b) const;

    BinaryTree shape;
    std::vector<uint32_t> in0;      // preorder -> inorder
    std::vector<uint32_t> preOfIn;  // inorder -> preorder
    std::vector<uint32_t> sub;      // subtree size
    std::vector<uint32_t> sizeLeft;
    std::vector<int32_t> parent0;   // -1 at the root
    std::vector<int32_t> left0, right0;
    // first null rank inside each subtree; equals the nulls met before the node in preorder
    std::vector<uint32_t> nullLo;
    // null rank k: owning node, and how many nodes precede it in preorder
    std::vector<uint32_t> nullOwner;
    std::vector<uint32_t> preBeforeNull;
    std::vector<uint8_t> lcaTable;  // size^2 entries when size <= 255
};

}  // namespace hst
