#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hst/bits.hpp"

namespace hst {

using NodeId = uint32_t;  // 1-based preorder rank, 0 means "no node"

// Binary tree with nodes numbered 1..n in preorder.
class BinaryTree {
public:
    BinaryTree() : left_(1, 0), right_(1, 0) {}
    // arrays are indexed 0..n with slot 0 unused; throws if not preorder-numbered
    BinaryTree(std::vector<NodeId> left, std::vector<NodeId> right);

    size_t size() const { return left_.size() - 1; }
    NodeId root() const { return size() ? 1 : 0; }
    NodeId left(NodeId v) const { return left_[v]; }
    NodeId right(NodeId v) const { return right_[v]; }
    const std::vector<NodeId>& lefts() const { return left_; }
    const std::vector<NodeId>& rights() const { return right_; }

    bool operator==(const BinaryTree& o) const { return left_ == o.left_ && right_ == o.right_; }
    bool operator!=(const BinaryTree& o) const { return !(*this == o); }

    // skips the preorder check; callers guarantee it
    static BinaryTree trusted(std::vector<NodeId> left, std::vector<NodeId> right);

private:
    std::vector<NodeId> left_, right_;
};

// Ordered forest with nodes numbered 1..n in preorder; a tree is a forest with one root.
class OrdinalTree {
public:
    OrdinalTree() : start_(2, 0), parent_(1, 0) {}
    // children[v] lists v's children in order (slot 0 lists the roots); ids must be preorder
    explicit OrdinalTree(const std::vector<std::vector<NodeId>>& children);
    // parent[v] for v = 1..n, 0 for roots; preorder ids make the sibling order implicit
    static OrdinalTree from_parents(const std::vector<NodeId>& parent);

    size_t size() const { return parent_.size() - 1; }
    size_t degree(NodeId v) const { return start_[v + 1] - start_[v]; }
    // children of v; v = 0 yields the roots
    const NodeId* children_begin(NodeId v) const { return kids_.data() + start_[v]; }
    const NodeId* children_end(NodeId v) const { return kids_.data() + start_[v + 1]; }
    NodeId child(NodeId v, size_t i) const { return kids_[start_[v] + i]; }
    NodeId parent(NodeId v) const { return parent_[v]; }
    size_t root_count() const { return degree(0); }
    bool is_tree() const { return root_count() == 1; }

    bool operator==(const OrdinalTree& o) const { return parent_ == o.parent_; }
    bool operator!=(const OrdinalTree& o) const { return !(*this == o); }

private:
    std::vector<size_t> start_;  // CSR offsets for v = 0..n, plus sentinel
    std::vector<NodeId> kids_;
    std::vector<NodeId> parent_;
};

// Balanced parentheses: '(' is bit 1, ')' is bit 0.
BitBuf bp_encode(const BinaryTree& t);
BitBuf bp_encode(const OrdinalTree& f);
// reads exactly 2n bits
BinaryTree bp_decode_binary(BitReader& in, size_t n);
// reads exactly 2n bits, which must form a balanced forest
OrdinalTree bp_decode_ordinal(BitReader& in, size_t n);

std::string bp_string(const BinaryTree& t);
std::string bp_string(const OrdinalTree& f);
BinaryTree parse_binary_bp(const std::string& s);
OrdinalTree parse_ordinal_bp(const std::string& s);

// First-child next-sibling transform; preorder numbering is preserved.
BinaryTree fcns(const OrdinalTree& f);
OrdinalTree fcns_inverse(const BinaryTree& t);

enum NodeType : uint8_t { kLeaf = 0, kLeftUnary = 1, kBinary = 2, kRightUnary = 3 };

struct Annotations {
    std::vector<uint32_t> subtreeSize;  // all arrays indexed by node id, slot 0 describes the empty tree
    std::vector<uint32_t> height;       // empty tree has height 0
    std::vector<uint32_t> depth;        // root has depth 0
    std::vector<uint8_t> nodeType;
    std::vector<uint8_t> degree;
    std::vector<uint32_t> inorderRank;  // 1-based
};

Annotations annotate(const BinaryTree& t);
std::vector<uint32_t> subtree_sizes(const BinaryTree& t);
std::vector<uint32_t> subtree_sizes(const OrdinalTree& f);

// inorder rank -> preorder id
std::vector<NodeId> inorder_sequence(const BinaryTree& t);

}  // namespace hst
