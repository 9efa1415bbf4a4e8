#pragma once

// helpers shared by the source model, the samplers and the arithmetic coder

#include <map>
#include <random>
#include <vector>

#include "hst/sources.hpp"

namespace hst {

double lg_big(const BigInt& x);
BigInt binom_big(uint64_t n, uint64_t k);
// uniform in [0, bound)
BigInt uniform_below(const BigInt& bound, std::mt19937_64& rng);

// T[h] for h = 0..; grows on demand
const std::vector<BigInt>& avl_height_table(unsigned h);
// a[n][h] = number of AVL trees with n nodes and height h
const std::vector<std::map<unsigned, BigInt>>& avl_size_table(size_t n);
// cnt[n][profile] for left-leaning red-black shapes
const std::vector<std::map<uint64_t, BigInt>>& llrb_table(size_t n);
uint64_t llrb_combine(uint64_t pl, uint64_t pr);
bool llrb_root_ok(uint64_t p);
const std::vector<BigInt>& wb_table(size_t n, uint64_t num, uint64_t den);
bool wb_ok(uint64_t l, uint64_t r, uint64_t num, uint64_t den);

uint32_t node_type(const BinaryTree& t, NodeId v);
std::vector<uint64_t> type_histories(const BinaryTree& t, unsigned k);
BinaryTree renumber_preorder(uint32_t root, const std::vector<uint32_t>& L, const std::vector<uint32_t>& R,
                             uint32_t none);

// Builds a binary tree top-down in preorder. Each pending slot carries a parameter (size or
// height) and the slot in its parent it fills; choose(param) returns the parameters of the
// left and right children, with 0 meaning "empty".
template <class Choose>
BinaryTree grow_binary(uint64_t rootParam, Choose choose) {
    std::vector<NodeId> left(1, 0), right(1, 0);
    if (rootParam == 0) return BinaryTree();
    struct Pending {
        uint64_t param;
        NodeId parent;
        bool isRight;
    };
    std::vector<Pending> st{{rootParam, 0, false}};
    while (!st.empty()) {
        Pending p = st.back();
        st.pop_back();
        NodeId id = NodeId(left.size());
        left.push_back(0);
        right.push_back(0);
        if (p.parent) (p.isRight ? right : left)[p.parent] = id;
        auto [a, b] = choose(p.param);
        if (b) st.push_back({b, id, true});
        if (a) st.push_back({a, id, false});
    }
    return BinaryTree::trusted(std::move(left), std::move(right));
}

}  // namespace hst
