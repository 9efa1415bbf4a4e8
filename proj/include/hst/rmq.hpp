#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hst/hypercodec.hpp"
#include "hst/navigate.hpp"

namespace hst {

// Min-rooted Cartesian tree, leftmost minimum on ties; inorder rank j is A[j].
BinaryTree cartesian_tree(const std::vector<int64_t>& A);

// Range-minimum index that keeps only the hypersuccinct Cartesian tree.
class RMQIndex {
public:
    explicit RMQIndex(const std::vector<int64_t>& A, std::optional<size_t> B = std::nullopt);
    explicit RMQIndex(HsBlob blob);

    // 1-based inclusive interval, returns the leftmost position of the minimum
    uint64_t query(uint64_t i, uint64_t j) const;
    size_t size() const { return nav_.size(); }
    const HsBlob& blob() const { return blob_; }
    const NavIndex& nav() const { return nav_; }

private:
    HsBlob blob_;
    NavIndex nav_;
};

struct RunsProfile {
    size_t n = 0;
    size_t r = 0;  // maximal non-decreasing runs
    size_t s = 0;  // runs of length 1
    double boundBits = 0;     // 2 lg C(n, r)
    double narayanaBits = 0;  // lg N_{n,r}
};

RunsProfile runs_profile(const std::vector<int64_t>& A);
double lg_narayana(uint64_t n, uint64_t r);

// BP variant L "(" R ")": nodes appear in inorder
std::string bp_inorder_variant(const BinaryTree& t);
// occurrences of "()" in a balanced string; throws MalformedInput if unbalanced
size_t dyck_peaks(const BitBuf& bp);
size_t dyck_peaks(const std::string& bp);

std::vector<int64_t> parse_array(const std::string& text);

}  // namespace hst
