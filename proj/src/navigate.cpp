#include "hst/navigate.hpp"

#include <algorithm>
#include <stdexcept>

namespace hst {

NavIndex::NavIndex(const HsBlob& blob) {
    if (blob.kind != TreeKind::kBinary) throw std::invalid_argument("navigation needs a binary blob");
    view_ = parse_binary_blob(blob);
    if (view_.n == 0) return;
    layout_ = layout_binary(view_);
    size_t m = view_.m;

    topParent_.assign(m, UINT32_MAX);
    topSize_.assign(m, 1);
    for (uint32_t i = 0; i < m; ++i) {
        NodeId u = i + 1;
        if (NodeId c = view_.top.left(u)) topParent_[c - 1] = i;
        if (NodeId c = view_.top.right(u)) topParent_[c - 1] = i;
    }
    for (size_t i = m; i-- > 1;) topSize_[topParent_[i]] += topSize_[i];

    for (uint32_t i = 0; i < m; ++i) {
        const BinaryShapeInfo& S = shape(i);
        uint64_t prev = 0;
        for (uint32_t j = 0; j < S.size(); ++j) {
            uint64_t g = global_pre(i, j);
            if (j == 0 || g != prev + 1)
                preRuns_.push_back({g, i, j, 1});
            else
                ++preRuns_.back().len;
            prev = g;
        }
        for (uint32_t k = 0; k < S.size(); ++k) {
            uint64_t g = global_in(i, S.preOfIn[k]);
            if (k == 0 || g != prev + 1)
                inRuns_.push_back({g, i, k, 1});
            else
                ++inRuns_.back().len;
            prev = g;
        }
    }
    auto byStart = [](const Run& a, const Run& b) { return a.start < b.start; };
    for (auto* runs : {&preRuns_, &inRuns_}) {
        std::sort(runs->begin(), runs->end(), byStart);
        uint64_t next = 1;
        for (const Run& r : *runs) {
            if (r.start != next) throw MalformedStream("micro trees do not tile the rank space");
            next += r.len;
        }
        if (next != view_.n + 1) throw MalformedStream("micro trees do not tile the rank space");
    }

    // Euler tour of the top tier
    first_.assign(m, 0);
    std::vector<std::pair<uint32_t, uint8_t>> st{{0, 0}};
    std::vector<uint32_t> d(m, 0);
    while (!st.empty()) {
        auto& [i, state] = st.back();
        uint32_t cur = i;
        if (state == 0) first_[cur] = uint32_t(euler_.size());
        euler_.push_back(cur);
        depth_.push_back(d[cur]);
        NodeId kids[2] = {view_.top.left(cur + 1), view_.top.right(cur + 1)};
        while (state < 2 && !kids[state]) ++state;
        if (state == 2) {
            st.pop_back();  // the parent is emitted again on the next pass
            continue;
        }
        uint32_t c = kids[state] - 1;
        ++state;
        d[c] = d[cur] + 1;
        st.push_back({c, 0});
    }
    size_t len = euler_.size();
    sparse_.push_back(std::vector<uint32_t>(len));
    for (uint32_t k = 0; k < len; ++k) sparse_[0][k] = k;
    for (size_t w = 1; (size_t(1) << w) <= len; ++w) {
        const auto& prevLevel = sparse_[w - 1];
        std::vector<uint32_t> cur(len - (size_t(1) << w) + 1);
        for (size_t k = 0; k < cur.size(); ++k) {
            uint32_t a = prevLevel[k], b = prevLevel[k + (size_t(1) << (w - 1))];
            cur[k] = depth_[a] <= depth_[b] ? a : b;
        }
        sparse_.push_back(std::move(cur));
    }
}

uint64_t NavIndex::global_pre(uint32_t i, uint32_t j) const {
    const BinaryShapeInfo& S = shape(i);
    int64_t pl = view_.leftPortal[i], pr = view_.rightPortal[i], lo = S.nullLo[j];
    return layout_.rootPre[i] + j + (pl >= 0 && pl < lo ? layout_.leftSize[i] : 0) +
           (pr >= 0 && pr < lo ? layout_.rightSize[i] : 0);
}

uint64_t NavIndex::global_in(uint32_t i, uint32_t j) const {
    const BinaryShapeInfo& S = shape(i);
    int64_t pl = view_.leftPortal[i], pr = view_.rightPortal[i], k = S.in0[j];
    return layout_.inStart[i] + uint64_t(k) + (pl >= 0 && pl <= k ? layout_.leftSize[i] : 0) +
           (pr >= 0 && pr <= k ? layout_.rightSize[i] : 0);
}

void NavIndex::check(NodeId v) const {
    if (v < 1 || v > view_.n) throw std::out_of_range("node id out of range");
}

NavIndex::Loc NavIndex::locate(NodeId v) const {
    check(v);
    auto it = std::upper_bound(preRuns_.begin(), preRuns_.end(), uint64_t(v),
                               [](uint64_t x, const Run& r) { return x < r.start; });
    --it;
    return {it->micro, uint32_t(it->local + (v - it->start))};
}

uint32_t NavIndex::top_lca(uint32_t a, uint32_t b) const {
    uint32_t l = first_[a], r = first_[b];
    if (l > r) std::swap(l, r);
    unsigned w = floor_lg(r - l + 1);
    uint32_t x = sparse_[w][l], y = sparse_[w][r + 1 - (uint32_t(1) << w)];
    return euler_[depth_[x] <= depth_[y] ? x : y];
}

uint32_t NavIndex::entry_owner(uint32_t w, uint32_t d) const {
    NodeId c = view_.top.left(w + 1);
    int32_t portal;
    if (c && c - 1 <= d && d < c - 1 + topSize_[c - 1])
        portal = view_.leftPortal[w];
    else
        portal = view_.rightPortal[w];
    return shape(w).nullOwner[size_t(portal)];
}

NodeId NavIndex::lca(NodeId u, NodeId v) const {
    Loc a = locate(u), b = locate(v);
    if (a.micro == b.micro) return NodeId(global_pre(a.micro, shape(a.micro).lca(a.local, b.local)));
    uint32_t w = top_lca(a.micro, b.micro);
    uint32_t x = w == a.micro ? a.local : entry_owner(w, a.micro);
    uint32_t y = w == b.micro ? b.local : entry_owner(w, b.micro);
    return NodeId(global_pre(w, shape(w).lca(x, y)));
}

uint64_t NavIndex::inorder_rank(NodeId v) const {
    Loc a = locate(v);
    return global_in(a.micro, a.local);
}

NodeId NavIndex::inorder_select(uint64_t r) const {
    if (r < 1 || r > view_.n) throw std::out_of_range("inorder rank out of range");
    auto it = std::upper_bound(inRuns_.begin(), inRuns_.end(), r,
                               [](uint64_t x, const Run& run) { return x < run.start; });
    --it;
    uint32_t k = uint32_t(it->local + (r - it->start));
    return NodeId(global_pre(it->micro, shape(it->micro).preOfIn[k]));
}

NodeId NavIndex::parent(NodeId v) const {
    Loc a = locate(v);
    const BinaryShapeInfo& S = shape(a.micro);
    if (S.parent0[a.local] >= 0) return NodeId(global_pre(a.micro, uint32_t(S.parent0[a.local])));
    if (a.micro == 0) return 0;
    uint32_t p = topParent_[a.micro];
    return NodeId(global_pre(p, entry_owner(p, a.micro)));
}

uint64_t NavIndex::subtree_size(NodeId v) const {
    Loc a = locate(v);
    const BinaryShapeInfo& S = shape(a.micro);
    // nulls of the local subtree are the contiguous ranks [lo, lo + size]
    int64_t lo = S.nullLo[a.local], hi = lo + S.sub[a.local];
    int64_t pl = view_.leftPortal[a.micro], pr = view_.rightPortal[a.micro];
    uint64_t s = S.sub[a.local];
    if (pl >= lo && pl <= hi) s += layout_.leftSize[a.micro];
    if (pr >= lo && pr <= hi) s += layout_.rightSize[a.micro];
    return s;
}

size_t NavIndex::overhead_words() const {
    size_t w = 5 * view_.m + topParent_.size() + topSize_.size() + 3 * (preRuns_.size() + inRuns_.size()) +
               first_.size() + euler_.size() + depth_.size();
    for (const auto& level : sparse_) w += level.size();
    return w;
}

}  // namespace hst
