#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hst/bits.hpp"
#include "hst/tree.hpp"

namespace hst {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct EmptyClassError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SourceKind { kTypeProcess, kFixedSize, kFixedHeight, kDegree, kOrdinalFixedSize, kUniformSubclass };

enum class Family {
    kTypeProcess,
    kBst,
    kUniform,
    kBinomial,
    kAlmostPath,
    kFringeBalanced,
    kWeightBalanced,
    kAvlHeight,
    kDegree,
    kComposition,
    kLrm,
    kAvlSize,
    kLlrb,
};

struct SourceModel {
    SourceKind kind = SourceKind::kFixedSize;
    Family family = Family::kBst;
    std::string name;

    // type process: tau[z] for the base-3 history code z (digit = type - 1, padding digit 0)
    unsigned order = 0;
    std::vector<std::array<double, 4>> tau;

    double alpha = 0.5;           // binomial
    unsigned K = 0;               // almost paths
    unsigned t = 0;               // fringe-balanced
    uint64_t wbNum = 0, wbDen = 1;  // weight-balanced alpha as a fraction
    std::vector<double> degree;   // degree distribution d_0, d_1, ...

    bool binary() const {
        return kind != SourceKind::kDegree && kind != SourceKind::kOrdinalFixedSize;
    }
};

SourceModel type_process(unsigned k, std::vector<std::array<double, 4>> tau);
SourceModel memoryless(double q0, double q1, double q2, double q3);
SourceModel empirical_type_process(const BinaryTree& t, unsigned k);
SourceModel bst_source();
SourceModel uniform_source();
SourceModel binomial_source(double alpha);
SourceModel almost_path_source(unsigned K);
SourceModel fringe_balanced_source(unsigned t);
SourceModel weight_balanced_source(uint64_t num, uint64_t den);
SourceModel avl_height_source();
SourceModel avl_size_source();
SourceModel llrb_source();
SourceModel degree_source(std::vector<double> d);
SourceModel composition_source();
SourceModel lrm_source();

// CLI descriptors: bst, uniform, binomial:0.5, almostpath:K, fringebalanced:t, avl-size,
// avl-height, llrb, wb:2/7, motzkin, memoryless:q0,q1,q2,q3, composition, lrm, degree:d0,d1,...
SourceModel parse_source(const std::string& descriptor);

struct EntropyReport {
    double logProbBits = 0;  // +inf when P[t] = 0
    double perNode = 0;
};

EntropyReport log_prob(const SourceModel& s, const BinaryTree& t);
EntropyReport log_prob(const SourceModel& s, const OrdinalTree& t);

// fixed-size binary sources: p(l, r) for a node with subtree sizes l and r
double split_prob(const SourceModel& s, uint64_t l, uint64_t r);
// lg p(l, r), -inf when impossible; does not underflow
double lg_split_prob(const SourceModel& s, uint64_t l, uint64_t r);
// exact value where the family allows it (bst, uniform, almost paths, fringe-balanced, weight-balanced)
std::optional<Rational> split_prob_exact(const SourceModel& s, uint64_t l, uint64_t r);
// fixed-height sources: p(i, j) for subtree heights i and j (empty tree has height 0)
Rational height_pair_prob_exact(const SourceModel& s, unsigned i, unsigned j);
double height_pair_prob(const SourceModel& s, unsigned i, unsigned j);
double lg_height_pair_prob(const SourceModel& s, unsigned i, unsigned j);
// pair index for max(i, j) = h - 1: (0,h-1), ..., (h-1,h-1), then (h-1,0), ..., (h-1,h-2)
unsigned height_pair_index(unsigned i, unsigned j);
std::pair<unsigned, unsigned> height_pair_from_index(unsigned h, unsigned idx);

// ordinal fixed-size sources: p(n_1, ..., n_k)
double composition_prob(const SourceModel& s, const std::vector<uint64_t>& parts);

double type_entropy(const BinaryTree& t, unsigned k);
double degree_entropy(const OrdinalTree& t);
double shape_entropy(const OrdinalTree& t, unsigned k);
double subtree_size_entropy(const BinaryTree& t);
// full binary tree: left = first child, right = next sibling, a fresh leaf at every null
BinaryTree fcns_diamond(const OrdinalTree& t);

// Fixed-size and subclass sources take n; fixed-height takes h; type processes and degree
// distributions take a size cap (resampled until the tree has at most `target` nodes).
BinaryTree sample_binary(const SourceModel& s, size_t target, std::mt19937_64& rng);
OrdinalTree sample_ordinal(const SourceModel& s, size_t target, std::mt19937_64& rng);

BigInt count_avl_height(unsigned h);
BigInt count_avl_size(size_t n);
BigInt count_llrb(size_t n);
BigInt count_weight_balanced(size_t n, uint64_t num, uint64_t den);
// n for size-indexed classes, h for avl-height
BigInt count_subclass(const SourceModel& s, size_t param);
BigInt catalan(size_t n);

double bst_entropy_closed_form(size_t n);
double bst_entropy_limit();

// calls f on every binary tree with n nodes
void for_each_binary_tree(size_t n, const std::function<void(const BinaryTree&)>& f);
// sum over all trees of size n (or height n for fixed-height sources); n <= 14
double source_entropy_exhaustive(const SourceModel& s, size_t n);

// depth-first arithmetic code: gamma(|t|+1) (or gamma(h+1) for fixed-height sources), then the
// arithmetic-coded left subtree sizes (or height pairs) in preorder
BitBuf dfs_arith_encode(const SourceModel& s, const BinaryTree& t);
BinaryTree dfs_arith_decode(const SourceModel& s, BitReader& in);
// lg(1/P[t]) + 2 floor(lg(|t|+1)) + 3, +inf for P[t] = 0
double dfs_code_length(const SourceModel& s, const BinaryTree& t);

}  // namespace hst
