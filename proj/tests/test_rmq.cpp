#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include <boost/math/special_functions/gamma.hpp>

#include "hst/rmq.hpp"
#include "hst/sources.hpp"

using namespace hst;

namespace {

uint64_t brute_rmq(const std::vector<int64_t>& A, uint64_t i, uint64_t j) {
    uint64_t best = i;
    for (uint64_t k = i + 1; k <= j; ++k)
        if (A[k - 1] < A[best - 1]) best = k;
    return best;
}

// plain recursive definition, used to cross-check the stack build
BinaryTree cartesian_slow(const std::vector<int64_t>& A) {
    size_t n = A.size();
    std::vector<NodeId> L(n + 1, 0), R(n + 1, 0);
    NodeId next = 1;
    auto rec = [&](auto&& self, size_t lo, size_t hi) -> NodeId {  // [lo, hi)
        if (lo == hi) return 0;
        size_t m = lo;
        for (size_t k = lo + 1; k < hi; ++k)
            if (A[k] < A[m]) m = k;
        NodeId v = next++;
        L[v] = self(self, lo, m);
        R[v] = self(self, m + 1, hi);
        return v;
    };
    rec(rec, 0, n);
    return BinaryTree(L, R);
}

std::vector<int64_t> random_array(size_t n, int64_t range, std::mt19937_64& rng) {
    std::uniform_int_distribution<int64_t> d(-range, range);
    std::vector<int64_t> A(n);
    for (auto& x : A) x = d(rng);
    return A;
}

// exactly r maximal non-decreasing runs
std::vector<int64_t> array_with_runs(size_t n, size_t r, std::mt19937_64& rng) {
    std::vector<size_t> cuts(n - 1);
    std::iota(cuts.begin(), cuts.end(), 1);
    std::shuffle(cuts.begin(), cuts.end(), rng);
    cuts.resize(r - 1);
    cuts.push_back(0);
    cuts.push_back(n);
    std::sort(cuts.begin(), cuts.end());
    auto A = random_array(n, int64_t(1) << 40, rng);
    for (size_t k = 0; k + 1 < cuts.size(); ++k) std::sort(A.begin() + cuts[k], A.begin() + cuts[k + 1]);
    for (size_t k = 1; k + 1 < cuts.size(); ++k)
        if (A[cuts[k]] >= A[cuts[k] - 1]) A[cuts[k]] = A[cuts[k] - 1] - 1;
    return A;
}

struct Types {
    size_t leaf = 0, left = 0, right = 0, binary = 0;
};

Types count_types(const BinaryTree& t) {
    Types c;
    for (NodeId v = 1; v <= t.size(); ++v) {
        bool l = t.left(v), r = t.right(v);
        if (l && r)
            ++c.binary;
        else if (l)
            ++c.left;
        else if (r)
            ++c.right;
        else
            ++c.leaf;
    }
    return c;
}

bool near1(double got, double want) {
    return std::abs(got - want) <= 1.0;
}

}  // namespace

TEST_CASE("example array") {
    std::vector<int64_t> A{2, 3, 4, 1, 6, 5, 7, 9, 10, 8};
    BinaryTree t = cartesian_tree(A);
    CHECK(bp_string(t) == "(()()())(())()(()())");
    CHECK(bp_inorder_variant(t) == "((()))(()(((())())))");
    CHECK(dyck_peaks(bp_inorder_variant(t)) == 4);
    CHECK(runs_profile(A).r == 4);
    RMQIndex idx(A);
    CHECK(idx.nav().inorder_rank(1) == 4);
    CHECK(idx.query(1, 10) == 4);
    CHECK(idx.query(5, 8) == 6);
    for (uint64_t i = 1; i <= 10; ++i) CHECK(idx.query(i, i) == i);
    CHECK_THROWS_AS(idx.query(3, 2), std::out_of_range);
    CHECK_THROWS_AS(idx.query(0, 2), std::out_of_range);
    CHECK_THROWS_AS(idx.query(1, 11), std::out_of_range);
    CHECK_THROWS_AS(cartesian_tree({}), std::invalid_argument);
}

TEST_CASE("increasing and all-equal arrays give right chains") {
    for (auto A : {std::vector<int64_t>{1, 2, 3, 4, 5}, std::vector<int64_t>{7, 7, 7, 7, 7}}) {
        BinaryTree t = cartesian_tree(A);
        for (NodeId v = 1; v < 5; ++v) {
            CHECK(t.left(v) == 0);
            CHECK(t.right(v) == v + 1);
        }
        RMQIndex idx(A);
        CHECK(idx.query(2, 5) == 2);
    }
}

TEST_CASE("dyck peaks and arrays") {
    CHECK(dyck_peaks(std::string("()()")) == 2);
    CHECK(dyck_peaks(std::string("(())")) == 1);
    CHECK_THROWS_AS(dyck_peaks(std::string("(()")), MalformedInput);
    CHECK_THROWS_AS(dyck_peaks(std::string("())(")), MalformedInput);
    CHECK_THROWS_AS(dyck_peaks(std::string("(x)")), MalformedInput);
    CHECK(parse_array(" 3 -4\n9223372036854775807 ") == std::vector<int64_t>{3, -4, INT64_MAX});
    CHECK_THROWS_AS(parse_array("1 2x"), MalformedInput);
    CHECK_THROWS_AS(parse_array("99999999999999999999"), MalformedInput);
}

TEST_CASE("stack build matches the recursive definition") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 500; ++rep) {
        auto A = random_array(1 + rng() % 300, rep % 2 ? 3 : 1000000, rng);
        CHECK(bp_string(cartesian_tree(A)) == bp_string(cartesian_slow(A)));
    }
}

TEST_CASE("all intervals on 200 random arrays") {
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 200; ++rep) {
        size_t n = 1 + rng() % 256;
        auto A = random_array(n, rep % 3 == 0 ? 4 : 1000, rng);
        RMQIndex idx(A, rep % 4 == 0 ? std::optional<size_t>(1 + rng() % 6) : std::nullopt);
        for (uint64_t i = 1; i <= n; ++i)
            for (uint64_t j = i; j <= n; ++j)
                if (idx.query(i, j) != brute_rmq(A, i, j)) FAIL("n=" << n << " i=" << i << " j=" << j);
    }
}

TEST_CASE("all permutations of eight") {
    std::vector<int64_t> A{1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<std::pair<uint64_t, uint64_t>> qs{{1, 8}, {1, 4}, {5, 8}, {2, 7}, {3, 3}, {4, 6}, {1, 2}, {7, 8}};
    size_t perms = 0;
    do {
        RMQIndex idx(A);
        for (auto [i, j] : qs)
            if (idx.query(i, j) != brute_rmq(A, i, j)) FAIL("permutation " << perms);
        ++perms;
    } while (std::next_permutation(A.begin(), A.end()));
    CHECK(perms == 40320);
}

TEST_CASE("runs: peaks of the variant BP and node types") {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 1000; ++rep) {
        size_t n = 1 + rng() % 400;
        auto A = random_array(n, rep % 2 ? 5 : 1000000000, rng);
        BinaryTree t = cartesian_tree(A);
        RunsProfile p = runs_profile(A);
        REQUIRE(dyck_peaks(bp_inorder_variant(t)) == p.r);
        Types c = count_types(t);
        REQUIRE(c.leaf + c.left == p.r);
        REQUIRE(c.binary + c.left + 1 == p.r);
        CHECK(near1(double(c.left), double(p.s)));
        CHECK(near1(double(c.leaf), double(p.r) - double(p.s)));
        CHECK(near1(double(c.right), double(n) - 2.0 * double(p.r) + double(p.s)));
        CHECK(p.s <= p.r);
    }
}

TEST_CASE("runs profile spot values") {
    CHECK(lg_narayana(4, 2) == doctest::Approx(std::log2(6.0)).epsilon(1e-12));
    CHECK(std::abs(lg_narayana(4, 2) - std::log2(6.0)) < 1e-9);
    // N(5,2) = 10, N(6,3) = 50
    CHECK(std::abs(lg_narayana(5, 2) - std::log2(10.0)) < 1e-9);
    CHECK(std::abs(lg_narayana(6, 3) - std::log2(50.0)) < 1e-9);
    std::vector<int64_t> sorted(100), rev(100);
    std::iota(sorted.begin(), sorted.end(), 0);
    std::iota(rev.rbegin(), rev.rend(), 0);
    RunsProfile a = runs_profile(sorted), b = runs_profile(rev);
    CHECK(a.r == 1);
    CHECK(a.s == 0);
    CHECK(std::abs(a.narayanaBits) < 1e-9);
    CHECK(b.r == 100);
    CHECK(b.s == 100);
    CHECK(std::abs(b.narayanaBits) < 1e-9);
}

TEST_CASE("Cartesian trees of random permutations follow the BST source") {
    std::mt19937_64 rng(14);
    SourceModel bst = bst_source();
    const size_t n = 4, N = 100000;
    std::map<std::string, size_t> seen;
    std::map<std::string, double> prob;
    std::vector<int64_t> A(n);
    for (size_t k = 0; k < N; ++k) {
        std::iota(A.begin(), A.end(), 0);
        std::shuffle(A.begin(), A.end(), rng);
        BinaryTree t = cartesian_tree(A);
        std::string key = bp_string(t);
        ++seen[key];
        if (!prob.count(key)) prob[key] = std::exp2(-log_prob(bst, t).logProbBits);
    }
    CHECK(seen.size() == 14);
    double total = 0, stat = 0;
    for (const auto& [key, p] : prob) {
        total += p;
        double e = p * N;
        stat += (double(seen[key]) - e) * (double(seen[key]) - e) / e;
    }
    CHECK(total == doctest::Approx(1.0));
    double pv = boost::math::gamma_q(13.0 / 2, stat / 2);
    CHECK(pv > 1e-4);
}

TEST_CASE("type entropy of Cartesian trees against the runs bound") {
    std::mt19937_64 rng(15);
    const size_t n = 100000;
    for (size_t r : {size_t(1), n / 100, n / 10, n / 2}) {
        auto A = array_with_runs(n, r, rng);
        RunsProfile p = runs_profile(A);
        REQUIRE(p.r == r);
        double h = type_entropy(cartesian_tree(A), 0);
        CHECK_MESSAGE(h <= p.boundBits + 5 * std::log2(double(n)), "r=" << r << " H0=" << h << " bound=" << p.boundBits);
        CHECK(p.narayanaBits <= p.boundBits);
    }
}

TEST_CASE("million-element build and queries") {
    std::mt19937_64 rng(16);
    auto A = random_array(1000000, 1000000000, rng);
    RMQIndex idx(A);
    for (int q = 0; q < 2000; ++q) {
        uint64_t i = 1 + rng() % 1000000, j = 1 + rng() % 1000000;
        if (i > j) std::swap(i, j);
        if (j - i > 5000) j = i + rng() % 5000;
        REQUIRE(idx.query(i, j) == brute_rmq(A, i, j));
    }
}
