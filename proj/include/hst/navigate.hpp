#pragma once

#include <cstdint>
#include <vector>

#include "hst/hypercodec.hpp"

namespace hst {

// Queries over a binary hypersuccinct blob without decoding the whole tree.
// Node ids are global preorder ranks 1..n, inorder ranks are 1..n.
class NavIndex {
public:
    explicit NavIndex(const HsBlob& blob);

    size_t size() const { return view_.n; }
    size_t micro_count() const { return view_.m; }

    NodeId lca(NodeId u, NodeId v) const;
    uint64_t inorder_rank(NodeId v) const;
    NodeId inorder_select(uint64_t r) const;
    NodeId parent(NodeId v) const;  // 0 for the root
    uint64_t subtree_size(NodeId v) const;

    // a maximal run of consecutive global ranks inside one micro tree
    struct Run {
        uint64_t start;  // first global rank
        uint32_t micro;
        uint32_t local;  // local preorder index (preorder runs) or local inorder index (inorder runs)
        uint32_t len;
    };
    const std::vector<Run>& preorder_runs() const { return preRuns_; }
    const std::vector<Run>& inorder_runs() const { return inRuns_; }
    // words held by the index beyond the blob itself
    size_t overhead_words() const;

private:
    struct Loc {
        uint32_t micro, local;
    };
    Loc locate(NodeId v) const;
    const BinaryShapeInfo& shape(uint32_t i) const { return view_.shapes[view_.shapeOf[i]]; }
    uint64_t global_pre(uint32_t i, uint32_t j) const;
    uint64_t global_in(uint32_t i, uint32_t j) const;
    uint32_t top_lca(uint32_t a, uint32_t b) const;  // micro indices
    // local node of micro w through which micro d (a proper top-tier descendant) hangs
    uint32_t entry_owner(uint32_t w, uint32_t d) const;
    void check(NodeId v) const;

    BinaryBlobView view_;
    BinaryLayout layout_;
    std::vector<uint32_t> topParent_, topSize_;
    std::vector<Run> preRuns_, inRuns_;
    // Euler tour of the top tier with a sparse table over depths
    std::vector<uint32_t> first_, euler_, depth_;
    std::vector<std::vector<uint32_t>> sparse_;
};

}  // namespace hst
