#pragma once

#include <algorithm>
#include <random>
#include <utility>
#include <vector>

#include "hst/tree.hpp"

namespace testutil {

using hst::NodeId;

// random binary tree, left size uniform at every node
inline hst::BinaryTree random_bst(size_t n, std::mt19937_64& rng) {
    std::vector<NodeId> l(n + 1, 0), r(n + 1, 0);
    // frames: (subtree size, parent slot to fill)
    std::vector<std::pair<size_t, NodeId*>> st;
    NodeId next = 1;
    NodeId dummy = 0;
    if (n) st.push_back({n, &dummy});
    std::vector<std::pair<size_t, NodeId*>> order;
    while (!st.empty()) {
        auto [s, slot] = st.back();
        st.pop_back();
        NodeId v = next++;
        *slot = v;
        size_t ls = std::uniform_int_distribution<size_t>(0, s - 1)(rng);
        size_t rs = s - 1 - ls;
        if (rs) st.push_back({rs, &r[v]});
        if (ls) st.push_back({ls, &l[v]});
    }
    return hst::BinaryTree(std::move(l), std::move(r));
}

// left-leaning or right-leaning paths
inline hst::BinaryTree path_tree(size_t n, bool leftward) {
    std::vector<NodeId> l(n + 1, 0), r(n + 1, 0);
    for (NodeId v = 1; v < n; ++v) (leftward ? l : r)[v] = v + 1;
    return hst::BinaryTree(std::move(l), std::move(r));
}

// renumber an arbitrary rooted forest (parent[v] = 0 for roots) into preorder
inline hst::OrdinalTree ordinal_from_any_parents(const std::vector<NodeId>& parent) {
    size_t n = parent.size() - 1;
    std::vector<std::vector<NodeId>> kids(n + 1);
    for (NodeId v = 1; v <= n; ++v) kids[parent[v]].push_back(v);
    std::vector<NodeId> id(n + 1, 0), newParent(n + 1, 0);
    NodeId next = 1;
    std::vector<NodeId> st;
    for (auto it = kids[0].rbegin(); it != kids[0].rend(); ++it) st.push_back(*it);
    while (!st.empty()) {
        NodeId v = st.back();
        st.pop_back();
        id[v] = next++;
        for (auto it = kids[v].rbegin(); it != kids[v].rend(); ++it) st.push_back(*it);
    }
    for (NodeId v = 1; v <= n; ++v) newParent[id[v]] = parent[v] ? id[parent[v]] : 0;
    return hst::OrdinalTree::from_parents(newParent);
}

// random recursive tree: node i picks a uniform earlier parent
inline hst::OrdinalTree random_ordinal(size_t n, std::mt19937_64& rng) {
    std::vector<NodeId> parent(n + 1, 0);
    for (NodeId v = 2; v <= n; ++v) parent[v] = std::uniform_int_distribution<NodeId>(1, v - 1)(rng);
    return ordinal_from_any_parents(parent);
}

inline hst::OrdinalTree star(size_t n) {
    std::vector<NodeId> parent(n + 1, 1);
    parent[0] = 0;
    if (n) parent[1] = 0;
    return hst::OrdinalTree::from_parents(parent);
}

}  // namespace testutil

namespace testutil {

// build a binary tree from edges between inorder labels (smaller label = left child)
inline hst::BinaryTree from_inorder_edges(size_t n, NodeId root, const std::vector<std::pair<NodeId, NodeId>>& edges) {
    std::vector<NodeId> L(n + 1, 0), R(n + 1, 0);
    for (auto [p, c] : edges) (c < p ? L : R)[p] = c;
    std::vector<NodeId> id(n + 1, 0), st{root};
    NodeId next = 1;
    while (!st.empty()) {
        NodeId v = st.back();
        st.pop_back();
        id[v] = next++;
        if (R[v]) st.push_back(R[v]);
        if (L[v]) st.push_back(L[v]);
    }
    std::vector<NodeId> l(n + 1, 0), r(n + 1, 0);
    for (NodeId v = 1; v <= n; ++v) {
        if (L[v]) l[id[v]] = id[L[v]];
        if (R[v]) r[id[v]] = id[R[v]];
    }
    return hst::BinaryTree(l, r);
}

// the 20-node example tree, from the edge list of its drawing (nodes named by inorder rank)
inline hst::BinaryTree figure_tree() {
    return from_inorder_edges(20, 19,
                              {{19, 20}, {19, 10}, {10, 16}, {10, 9}, {9, 5}, {5, 7}, {5, 4}, {4, 2}, {2, 3}, {2, 1},
                               {7, 8}, {7, 6}, {16, 18}, {16, 14}, {14, 15}, {14, 13}, {13, 12}, {12, 11}, {18, 17}});
}

// nesting "(" L R ")", the form in which the figure caption prints the tree
inline std::string nested_parens(const hst::BinaryTree& t, NodeId v) {
    if (!v) return "";
    return "(" + nested_parens(t, t.left(v)) + nested_parens(t, t.right(v)) + ")";
}

}  // namespace testutil
