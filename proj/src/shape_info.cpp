#include "hst/shape_info.hpp"

namespace hst {

BinaryShapeInfo::BinaryShapeInfo(const BinaryTree& t) : shape(t) {
    size_t s = t.size();
    Annotations a = annotate(t);
    in0.resize(s);
    preOfIn.resize(s);
    sub.resize(s);
    sizeLeft.resize(s);
    parent0.assign(s, -1);
    left0.assign(s, -1);
    right0.assign(s, -1);
    nullLo.resize(s);
    nullOwner.resize(s + 1);
    preBeforeNull.resize(s + 1);
    for (NodeId v = 1; v <= s; ++v) {
        uint32_t j = v - 1;
        in0[j] = a.inorderRank[v] - 1;
        preOfIn[in0[j]] = j;
        sub[j] = a.subtreeSize[v];
        sizeLeft[j] = a.subtreeSize[t.left(v)];
        nullLo[j] = in0[j] - sizeLeft[j];
        if (t.left(v)) {
            left0[j] = int32_t(t.left(v) - 1);
            parent0[t.left(v) - 1] = int32_t(j);
        } else {
            nullOwner[in0[j]] = j;
            preBeforeNull[in0[j]] = j + 1;
        }
        if (t.right(v)) {
            right0[j] = int32_t(t.right(v) - 1);
            parent0[t.right(v) - 1] = int32_t(j);
        } else {
            nullOwner[in0[j] + 1] = j;
            preBeforeNull[in0[j] + 1] = j + 1 + sizeLeft[j];
        }
    }
    if (s <= 255) {
        lcaTable.resize(s * s);
        for (uint32_t x = 0; x < s; ++x)
            for (uint32_t y = 0; y < s; ++y) {
                // the ancestor of y whose subtree covers x
                int32_t u = int32_t(y);
                while (!(uint32_t(u) <= x && x < uint32_t(u) + sub[uint32_t(u)])) u = parent0[uint32_t(u)];
                lcaTable[x * s + y] = uint8_t(u);
            }
    }
}

uint32_t BinaryShapeInfo::lca(uint32_t x, uint32_t y) const {
    size_t s = size();
    if (!lcaTable.empty()) return lcaTable[x * s + y];
    int32_t u = int32_t(y);
    while (!(uint32_t(u) <= x && x < uint32_t(u) + sub[uint32_t(u)])) u = parent0[uint32_t(u)];
    return uint32_t(u);
}

}  // namespace hst
