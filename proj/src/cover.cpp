#include "hst/cover.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hst {

size_t default_block(size_t n) {
    if (n < 2) return 1;
    // ceil(lg n / 8) without floating point: lg n > 8(k-1) iff n > 2^(8(k-1))
    size_t k = 1;
    while (k * 8 < 64 && (uint64_t(n) > (uint64_t(1) << (8 * k)))) ++k;
    return k;
}

namespace {

struct Dsu {
    std::vector<uint32_t> up;
    uint32_t find(uint32_t x) {
        while (up[x] != x) {
            up[x] = up[up[x]];
            x = up[x];
        }
        return x;
    }
};

std::vector<NodeId> binary_parents(const BinaryTree& t) {
    std::vector<NodeId> par(t.size() + 1, 0);
    for (NodeId v = 1; v <= t.size(); ++v) {
        if (t.left(v)) par[t.left(v)] = v;
        if (t.right(v)) par[t.right(v)] = v;
    }
    return par;
}

// local shape induced by a connected node set listed in global preorder
BinaryTree induced_shape(const BinaryTree& t, const std::vector<NodeId>& nodes,
                         const std::vector<uint32_t>& compOf, uint32_t id,
                         const std::vector<uint32_t>& localIdx) {
    size_t s = nodes.size();
    std::vector<NodeId> l(s + 1, 0), r(s + 1, 0);
    for (size_t j = 0; j < s; ++j) {
        NodeId v = nodes[j];
        NodeId a = t.left(v), b = t.right(v);
        if (a && compOf[a] == id) l[j + 1] = localIdx[a] + 1;
        if (b && compOf[b] == id) r[j + 1] = localIdx[b] + 1;
    }
    return BinaryTree::trusted(std::move(l), std::move(r));
}

}  // namespace

BinaryCover decompose_binary(const BinaryTree& t, size_t B) {
    size_t n = t.size();
    if (n == 0) throw std::invalid_argument("cannot decompose the empty tree");
    if (B == 0) throw std::invalid_argument("block parameter must be positive");
    std::vector<uint32_t> sz = subtree_sizes(t);

    // components are named by a representative node; merged ones point to it
    Dsu dsu;
    dsu.up.resize(n + 1);
    std::iota(dsu.up.begin(), dsu.up.end(), 0);
    std::vector<uint32_t> csize(n + 1, 1);
    std::vector<uint8_t> sealed(n + 1, 0);

    if (n <= 2 * B) {
        for (NodeId v = 2; v <= n; ++v) dsu.up[v] = 1;
    } else {
        auto heavy = [&](NodeId c) { return c && sz[c] >= B; };
        for (NodeId v = NodeId(n); v >= 1; --v) {
            NodeId l = t.left(v), r = t.right(v);
            if (heavy(l) && heavy(r)) {
                sealed[dsu.find(l)] = 1;
                sealed[dsu.find(r)] = 1;
                sealed[v] = 1;
                continue;
            }
            for (NodeId c : {l, r}) {
                if (!c) continue;
                uint32_t rc = dsu.find(c);
                if (sealed[rc]) continue;  // a heavy child already cut off
                dsu.up[rc] = v;
                csize[v] += csize[rc];
            }
            if (csize[v] >= B) sealed[v] = 1;
        }
    }

    std::vector<uint32_t> compOf(n + 1, 0), localIdx(n + 1, 0);
    std::vector<int64_t> repToMicro(n + 1, -1);
    BinaryCover cover;
    cover.B = B;
    // preorder visit meets each component root first, so micro order is top-tier preorder
    for (NodeId v = 1; v <= n; ++v) {
        uint32_t rep = dsu.find(v);
        if (repToMicro[rep] < 0) {
            repToMicro[rep] = int64_t(cover.micro.size());
            cover.micro.emplace_back();
        }
        uint32_t id = uint32_t(repToMicro[rep]);
        compOf[v] = id;
        localIdx[v] = uint32_t(cover.micro[id].nodes.size());
        cover.micro[id].nodes.push_back(v);
    }
    size_t m = cover.micro.size();
    std::vector<NodeId> topL(m + 1, 0), topR(m + 1, 0);
    std::vector<NodeId> par = binary_parents(t);
    std::vector<Annotations> shapeAnn(m);
    for (uint32_t id = 0; id < m; ++id) {
        auto& mt = cover.micro[id];
        mt.shape = induced_shape(t, mt.nodes, compOf, id, localIdx);
        shapeAnn[id] = annotate(mt.shape);
    }
    for (uint32_t id = 1; id < m; ++id) {
        NodeId q = cover.micro[id].nodes[0];
        NodeId p = par[q];
        uint32_t pid = compOf[p];
        const auto& pm = cover.micro[pid];
        NodeId root = pm.nodes[0];
        bool viaLeft = t.left(p) == q;
        bool leftSide = (p == root) ? viaLeft : (p <= root + sz[t.left(root)]);
        uint32_t inord = shapeAnn[pid].inorderRank[localIdx[p] + 1];
        int32_t nullRank = int32_t(viaLeft ? inord - 1 : inord);
        if (leftSide) {
            cover.micro[pid].leftPortal = nullRank;
            topL[pid + 1] = id + 1;
        } else {
            cover.micro[pid].rightPortal = nullRank;
            topR[pid + 1] = id + 1;
        }
    }
    cover.top = BinaryTree::trusted(std::move(topL), std::move(topR));
    return cover;
}

OrdinalCover decompose_ordinal(const OrdinalTree& t, size_t B) {
    size_t n = t.size();
    if (n == 0 || !t.is_tree()) throw std::invalid_argument("ordinal decomposition needs one non-empty tree");
    if (B == 0) throw std::invalid_argument("block parameter must be positive");
    std::vector<uint32_t> sz = subtree_sizes(t);

    struct Comp {
        NodeId root;
        uint32_t size;
        int32_t lo, hi;  // range of the root's child indices packed into this component
        bool sealed;
    };
    std::vector<Comp> comps;
    comps.reserve(n + n / std::max<size_t>(B, 1) + 1);
    Dsu dsu;
    std::vector<uint32_t> firstComp(n + 1, 0), numComps(n + 1, 0);
    std::vector<int64_t> active(n + 1, -1);
    std::vector<uint8_t> mergedUp(n + 1, 0);

    auto new_comp = [&](NodeId v) {
        uint32_t id = uint32_t(comps.size());
        comps.push_back({v, 1, -1, -1, false});
        dsu.up.push_back(id);
        ++numComps[v];
        return id;
    };
    auto absorb = [&](uint32_t cur, NodeId child, int32_t j) {
        uint32_t x = uint32_t(active[child]);
        dsu.up[x] = cur;
        comps[cur].size += comps[x].size;
        if (comps[cur].lo < 0) comps[cur].lo = j;
        comps[cur].hi = j;
        mergedUp[child] = 1;
    };

    if (n <= 2 * B) {
        firstComp[1] = new_comp(1);
        for (NodeId v = 2; v <= n; ++v) {
            uint32_t c = new_comp(v);
            firstComp[v] = c;
            dsu.up[c] = 0;
            mergedUp[v] = 1;
            active[v] = c;
        }
        comps[0].size = uint32_t(n);
        comps[0].lo = t.degree(1) ? 0 : -1;
        comps[0].hi = int32_t(t.degree(1)) - 1;
        comps[0].sealed = true;
    } else {
        auto heavy = [&](NodeId c) { return sz[c] >= B; };
        for (NodeId v = NodeId(n); v >= 1; --v) {
            firstComp[v] = uint32_t(comps.size());
            const NodeId* kids = t.children_begin(v);
            int32_t k = int32_t(t.degree(v));
            int heavyCount = 0;
            int32_t heavyIdx = -1;
            for (int32_t j = 0; j < k; ++j)
                if (heavy(kids[j])) {
                    ++heavyCount;
                    heavyIdx = j;
                }
            int64_t cur = -1;
            if (heavyCount >= 2) {
                // branching node: heavy children keep their own components, gaps pack separately
                for (int32_t j = 0; j < k; ++j)
                    if (heavy(kids[j]) && active[kids[j]] >= 0) comps[size_t(active[kids[j]])].sealed = true;
                for (int32_t j = 0; j < k; ++j) {
                    if (heavy(kids[j])) {
                        if (cur >= 0) comps[size_t(cur)].sealed = true;
                        cur = -1;
                        continue;
                    }
                    if (cur < 0) cur = new_comp(v);
                    absorb(uint32_t(cur), kids[j], j);
                    if (comps[size_t(cur)].size >= B) {
                        comps[size_t(cur)].sealed = true;
                        cur = -1;
                    }
                }
                if (cur >= 0) comps[size_t(cur)].sealed = true;
                if (numComps[v] == 0) comps[new_comp(v)].sealed = true;
                continue;
            }
            // at most one heavy child; a permanent one leaves a gap that packing steps over
            int32_t gap = (heavyCount == 1 && active[kids[heavyIdx]] < 0) ? heavyIdx : -1;
            bool sealedAny = false;
            for (int32_t j = 0; j < k; ++j) {
                if (j == gap) continue;
                if (cur < 0) cur = new_comp(v);
                absorb(uint32_t(cur), kids[j], j);
                if (comps[size_t(cur)].size >= B) {
                    comps[size_t(cur)].sealed = true;
                    sealedAny = true;
                    cur = -1;
                }
            }
            if (cur >= 0) {
                if (sealedAny)
                    comps[size_t(cur)].sealed = true;
                else
                    active[v] = cur;
            } else if (!sealedAny) {
                cur = new_comp(v);
                if (B <= 1)
                    comps[size_t(cur)].sealed = true;
                else
                    active[v] = cur;
            }
        }
        if (active[1] >= 0) comps[size_t(active[1])].sealed = true;
    }

    // final components are the sealed ones; members are nodes merged into them
    std::vector<int64_t> finalOf(comps.size(), -1);
    std::vector<uint32_t> finalComp;  // final index -> comp id
    for (NodeId v = 1; v <= n; ++v)
        for (uint32_t c = firstComp[v]; c < firstComp[v] + numComps[v]; ++c)
            if (comps[c].sealed && !mergedUp[v]) {
                finalOf[c] = int64_t(finalComp.size());
                finalComp.push_back(c);
            }
    size_t m = finalComp.size();
    std::vector<int64_t> memberOf(n + 1, -1);
    for (NodeId v = 1; v <= n; ++v)
        if (mergedUp[v]) memberOf[v] = finalOf[dsu.find(uint32_t(active[v]))];

    std::vector<std::vector<NodeId>> nodes(m);
    std::vector<uint32_t> localIdx(n + 1, 0);
    for (NodeId v = 1; v <= n; ++v) {
        if (memberOf[v] >= 0) {
            localIdx[v] = uint32_t(nodes[size_t(memberOf[v])].size());
            nodes[size_t(memberOf[v])].push_back(v);
        } else {
            for (uint32_t c = firstComp[v]; c < firstComp[v] + numComps[v]; ++c)
                nodes[size_t(finalOf[c])].push_back(v);
        }
    }

    std::vector<uint32_t> childIdx(n + 1, 0);
    for (NodeId v = 1; v <= n; ++v)
        for (size_t j = 0; j < t.degree(v); ++j) childIdx[t.child(v, j)] = uint32_t(j);

    // top-tier parent and edge kind of each final component
    std::vector<int64_t> upParent(m, -1);  // -1 = dummy root
    std::vector<EdgeType> etype(m, kNewRightmost);
    std::vector<int32_t> ppos(m, -1), prank(m, -1);
    for (size_t f = 0; f < m; ++f) {
        NodeId r = nodes[f][0];
        bool first = f == 0 || nodes[f - 1][0] != r;
        if (r == 1) {
            etype[f] = first ? kNewRightmost : kContinuedRightmost;
            continue;
        }
        NodeId p = t.parent(r);
        int32_t cr = int32_t(childIdx[r]);
        if (memberOf[p] >= 0) {
            size_t P = size_t(memberOf[p]);
            upParent[f] = int64_t(P);
            etype[f] = kExternalChild;
            int32_t rank = 0;
            for (size_t j = 0; j < size_t(cr); ++j)
                if (memberOf[t.child(p, j)] == int64_t(P)) ++rank;
            ppos[P] = int32_t(localIdx[p]);
            prank[P] = rank;
            continue;
        }
        uint32_t c0 = firstComp[p], c1 = firstComp[p] + numComps[p];
        int64_t target = -1;
        EdgeType kind = kNewRightmost;
        // child intervals of p's components are disjoint and increase with the component id
        uint32_t after = c0;  // first component starting right of cr
        for (uint32_t lo = c0, hi = c1; lo < hi;) {
            uint32_t mid = lo + (hi - lo) / 2;
            if (comps[mid].lo <= cr)
                lo = after = mid + 1;
            else
                hi = mid;
        }
        if (after > c0) {
            const auto& c = comps[after - 1];
            if (c.lo >= 0 && c.lo < cr && cr < c.hi) {
                target = after - 1;
                kind = kExternalChild;
            } else if (c.hi >= 0 && c.hi < cr) {
                target = after - 1;
            }
        }
        if (target < 0 && after < c1 && comps[after].lo > cr) {
            target = after;
            kind = kNewLeftmost;
        }
        if (target < 0) target = c1 - 1;  // the lone childless component
        size_t P = size_t(finalOf[size_t(target)]);
        upParent[f] = int64_t(P);
        if (kind == kExternalChild) {
            etype[f] = kExternalChild;
            int32_t rank = 0;
            for (int32_t j = comps[size_t(target)].lo; j < cr; ++j)
                if (memberOf[t.child(p, size_t(j))] == int64_t(P)) ++rank;
            ppos[P] = 0;
            prank[P] = rank;
        } else if (kind == kNewLeftmost) {
            etype[f] = first ? kNewLeftmost : kContinuedLeftmost;
        } else {
            etype[f] = first ? kNewRightmost : kContinuedRightmost;
        }
    }

    // depth-first order of the top tier; child lists are already sorted by root preorder
    std::vector<std::vector<uint32_t>> upKids(m + 1);  // slot m is the dummy root
    for (size_t f = 0; f < m; ++f) upKids[upParent[f] < 0 ? m : size_t(upParent[f])].push_back(uint32_t(f));
    std::vector<uint32_t> order;
    order.reserve(m);
    std::vector<std::pair<uint32_t, size_t>> st{{uint32_t(m), 0}};
    while (!st.empty()) {
        auto& [u, i] = st.back();
        if (i == upKids[u].size()) {
            st.pop_back();
            continue;
        }
        uint32_t c = upKids[u][i++];
        order.push_back(c);
        st.push_back({c, 0});
    }
    std::vector<uint32_t> pos(m);
    for (size_t i = 0; i < m; ++i) pos[order[i]] = uint32_t(i);

    OrdinalCover cover;
    cover.B = B;
    cover.micro.resize(m);
    std::vector<NodeId> topParent(m + 2, 0);
    topParent[1] = 0;
    for (size_t f = 0; f < m; ++f) {
        auto& mt = cover.micro[pos[f]];
        mt.nodes = std::move(nodes[f]);
        NodeId r = mt.nodes[0];
        mt.sharedRoot = memberOf[r] < 0 && numComps[r] > 1;
        mt.portalPos = ppos[f];
        mt.portalRank = prank[f];
        mt.parentEdge = etype[f];
        topParent[pos[f] + 2] = upParent[f] < 0 ? 1 : NodeId(pos[size_t(upParent[f])] + 2);
        size_t s = mt.nodes.size();
        std::vector<NodeId> lp(s + 1, 0);
        for (size_t j = 1; j < s; ++j) {
            NodeId p = t.parent(mt.nodes[j]);
            lp[j + 1] = (memberOf[p] >= 0 && memberOf[p] == int64_t(f)) ? localIdx[p] + 1 : 1;
        }
        mt.shape = OrdinalTree::from_parents(lp);
    }
    cover.top = OrdinalTree::from_parents(topParent);
    return cover;
}

namespace {

CoverStats base_stats(const std::vector<uint32_t>& sz, const std::vector<NodeId>& par, size_t B, size_t m) {
    CoverStats st;
    st.m = m;
    for (size_t v = 1; v < sz.size(); ++v) {
        if (sz[v] >= B)
            ++st.heavyCount;
        else if (par[v] == 0 || sz[par[v]] >= B)
            ++st.maxLightTrees;
    }
    return st;
}

std::string at(size_t i) { return "micro " + std::to_string(i) + ": "; }

}  // namespace

CoverCheck validate_cover(const BinaryTree& t, const BinaryCover& c) {
    CoverCheck out;
    size_t n = t.size(), m = c.micro.size(), B = c.B;
    std::vector<uint32_t> sz = subtree_sizes(t);
    std::vector<NodeId> par = binary_parents(t);
    out.stats = base_stats(sz, par, B, m);
    auto fail = [&](std::string s) { out.violations.push_back(std::move(s)); };

    if (m == 0) {
        fail("cover has no micro trees");
        return out;
    }
    std::vector<int64_t> owner(n + 1, -1);
    std::vector<uint32_t> localIdx(n + 1, 0);
    for (size_t i = 0; i < m; ++i) {
        const auto& mt = c.micro[i];
        if (mt.nodes.empty() || mt.nodes.size() > 2 * B) fail(at(i) + "size outside [1, 2B]");
        if (mt.shape.size() != mt.nodes.size()) fail(at(i) + "shape size differs from node count");
        for (size_t j = 0; j < mt.nodes.size(); ++j) {
            NodeId v = mt.nodes[j];
            if (v == 0 || v > n) {
                fail(at(i) + "node id out of range");
                continue;
            }
            if (owner[v] >= 0)
                fail("node " + std::to_string(v) + " lies in micro trees " + std::to_string(owner[v]) + " and " +
                     std::to_string(i));
            owner[v] = int64_t(i);
            localIdx[v] = uint32_t(j);
        }
    }
    for (NodeId v = 1; v <= n; ++v)
        if (owner[v] < 0) fail("node " + std::to_string(v) + " is not covered");
    if (!out.ok()) return out;
    if (m > std::max<size_t>(1, 8 * n / B)) fail("micro-tree count exceeds 8n/B");
    if (c.top.size() != m) fail("top tier has wrong size");

    for (size_t i = 0; i < m; ++i) {
        const auto& mt = c.micro[i];
        NodeId root = mt.nodes[0];
        for (size_t j = 0; j < mt.nodes.size(); ++j) {
            NodeId v = mt.nodes[j];
            if (j > 0 && (j == 0 || mt.nodes[j - 1] >= v)) fail(at(i) + "nodes not in preorder");
            if (j > 0 && owner[par[v]] != int64_t(i)) fail(at(i) + "not connected");
            NodeId l = t.left(v), r = t.right(v);
            NodeId el = (l && owner[l] == int64_t(i)) ? localIdx[l] + 1 : 0;
            NodeId er = (r && owner[r] == int64_t(i)) ? localIdx[r] + 1 : 0;
            if (mt.shape.size() == mt.nodes.size() && (mt.shape.left(NodeId(j + 1)) != el || mt.shape.right(NodeId(j + 1)) != er))
                fail(at(i) + "shape does not match the induced subtree");
        }
        if (m > 1 && sz[root] < B) fail(at(i) + "root is light");
        // edges leaving this micro tree
        Annotations a = annotate(mt.shape);
        int nonRoot = 0, total = 0, fromRoot = 0;
        for (size_t j = 0; j < mt.nodes.size(); ++j) {
            NodeId v = mt.nodes[j];
            for (int side = 0; side < 2; ++side) {
                NodeId ch = side == 0 ? t.left(v) : t.right(v);
                if (!ch || owner[ch] == int64_t(i)) continue;
                ++total;
                (j == 0 ? fromRoot : nonRoot)++;
                size_t q = size_t(owner[ch]);
                if (c.micro[q].nodes[0] != ch) fail(at(q) + "entered below its root");
                int32_t rank = int32_t(side == 0 ? a.inorderRank[j + 1] - 1 : a.inorderRank[j + 1]);
                bool asLeft = c.top.left(NodeId(i + 1)) == q + 1;
                bool asRight = c.top.right(NodeId(i + 1)) == q + 1;
                if (asLeft && mt.leftPortal != rank) fail(at(i) + "left portal rank mismatch");
                if (asRight && mt.rightPortal != rank) fail(at(i) + "right portal rank mismatch");
                if (!asLeft && !asRight) fail(at(i) + "child micro tree missing from the top tier");
            }
        }
        if (total > 2) fail(at(i) + "more than two child micro trees");
        if (nonRoot > 1) fail(at(i) + "more than one non-root portal");
        if (total == 2 && fromRoot == 0) fail(at(i) + "two portals and none at the root");
        int topKids = (c.top.left(NodeId(i + 1)) != 0) + (c.top.right(NodeId(i + 1)) != 0);
        if (topKids != total) fail(at(i) + "top-tier degree differs from portal count");
        if ((mt.leftPortal >= 0) != (c.top.left(NodeId(i + 1)) != 0) ||
            (mt.rightPortal >= 0) != (c.top.right(NodeId(i + 1)) != 0))
            fail(at(i) + "portal presence disagrees with the top tier");
    }
    if (c.micro[0].nodes[0] != t.root()) fail("first micro tree does not hold the root");
    return out;
}

CoverCheck validate_cover(const OrdinalTree& t, const OrdinalCover& c) {
    CoverCheck out;
    size_t n = t.size(), m = c.micro.size(), B = c.B;
    std::vector<uint32_t> sz = subtree_sizes(t);
    std::vector<NodeId> par(n + 1, 0);
    for (NodeId v = 1; v <= n; ++v) par[v] = t.parent(v);
    out.stats = base_stats(sz, par, B, m);
    auto fail = [&](std::string s) { out.violations.push_back(std::move(s)); };
    if (m == 0) {
        fail("cover has no micro trees");
        return out;
    }
    if (c.top.size() != m + 1 || !c.top.is_tree()) fail("top tier has wrong size");

    // a node may appear in several micro trees only as their common root
    std::vector<int64_t> owner(n + 1, -1);  // micro holding v as a non-root node
    std::vector<uint32_t> rootCount(n + 1, 0), localIdx(n + 1, 0);
    for (size_t i = 0; i < m; ++i) {
        const auto& mt = c.micro[i];
        if (mt.nodes.empty() || mt.nodes.size() > 2 * B) fail(at(i) + "size outside [1, 2B]");
        if (mt.shape.size() != mt.nodes.size()) fail(at(i) + "shape size differs from node count");
        for (size_t j = 0; j < mt.nodes.size(); ++j) {
            NodeId v = mt.nodes[j];
            if (v == 0 || v > n) {
                fail(at(i) + "node id out of range");
                continue;
            }
            if (j == 0) {
                ++rootCount[v];
                continue;
            }
            if (owner[v] >= 0)
                fail("node " + std::to_string(v) + " lies in micro trees " + std::to_string(owner[v]) + " and " +
                     std::to_string(i));
            owner[v] = int64_t(i);
            localIdx[v] = uint32_t(j);
        }
    }
    for (NodeId v = 1; v <= n; ++v) {
        if (owner[v] < 0 && rootCount[v] == 0) fail("node " + std::to_string(v) + " is not covered");
        if (owner[v] >= 0 && rootCount[v] > 0)
            fail("node " + std::to_string(v) + " is shared but not only as a root");
    }
    if (!out.ok()) return out;
    if (m > std::max<size_t>(1, 8 * n / B)) fail("micro-tree count exceeds 8n/B");
    std::vector<uint32_t> childIdx(n + 1, 0);
    for (NodeId v = 1; v <= n; ++v)
        for (size_t j = 0; j < t.degree(v); ++j) childIdx[t.child(v, j)] = uint32_t(j);

    for (size_t i = 0; i < m; ++i) {
        const auto& mt = c.micro[i];
        NodeId root = mt.nodes[0];
        auto inHere = [&](NodeId v) { return v == root || owner[v] == int64_t(i); };
        std::vector<NodeId> lp(mt.nodes.size() + 1, 0);
        int external = 0;
        for (size_t j = 0; j < mt.nodes.size(); ++j) {
            NodeId v = mt.nodes[j];
            if (j > 0) {
                if (mt.nodes[j - 1] >= v) fail(at(i) + "nodes not in preorder");
                if (!inHere(par[v])) fail(at(i) + "not connected");
                lp[j + 1] = par[v] == root ? 1 : localIdx[par[v]] + 1;
                if (mt.shape.size() == mt.nodes.size() && mt.shape.parent(NodeId(j + 1)) != lp[j + 1])
                    fail(at(i) + "shape does not match the induced subtree");
                for (const NodeId* ch = t.children_begin(v); ch != t.children_end(v); ++ch)
                    if (!inHere(*ch)) ++external;
            }
        }
        if (external > 1) fail(at(i) + "more than one non-root external edge");
        if (m > 1 && sz[root] < B) fail(at(i) + "root is light");
        // children of the root held here form one interval, possibly with one hole
        std::vector<uint32_t> idx;  // ascending, since nodes are in preorder
        for (size_t j = 1; j < mt.nodes.size(); ++j)
            if (par[mt.nodes[j]] == root) idx.push_back(childIdx[mt.nodes[j]]);
        if (!idx.empty() && idx.back() - idx.front() + 1 > idx.size() + 1)
            fail(at(i) + "root children are not one interval");

        // top-tier parent
        NodeId upNode = c.top.parent(NodeId(i + 2));
        if (root == 1) {
            if (upNode != 1) fail(at(i) + "holds the root but hangs below a micro tree");
        } else {
            if (upNode < 2) {
                fail(at(i) + "hangs from the dummy root without holding the tree root");
                continue;
            }
            size_t P = upNode - 2;
            NodeId p = par[root];
            const auto& pm = c.micro[P];
            bool pInP = p == pm.nodes[0] || owner[p] == int64_t(P);
            if (!pInP) fail(at(i) + "top-tier parent does not hold the parent of its root");
            if (mt.parentEdge == kExternalChild) {
                int32_t want = p == pm.nodes[0] ? 0 : int32_t(localIdx[p]);
                if (pm.portalPos != want) fail(at(P) + "portal position mismatch");
            } else if (p != pm.nodes[0]) {
                fail(at(i) + "root-child edge type but the parent is not a root");
            }
        }
    }
    return out;
}

std::string dump_cover(const BinaryCover& c) {
    std::ostringstream os;
    os << "{\"B\": " << c.B << ", \"m\": " << c.micro.size() << ", \"micro\": [\n";
    for (size_t i = 0; i < c.micro.size(); ++i) {
        const auto& mt = c.micro[i];
        os << "  {\"root\": " << mt.nodes[0] << ", \"size\": " << mt.nodes.size() << ", \"shape\": \""
           << bp_string(mt.shape) << "\", \"leftPortal\": " << mt.leftPortal << ", \"rightPortal\": " << mt.rightPortal
           << "}" << (i + 1 < c.micro.size() ? ",\n" : "\n");
    }
    os << "]}\n";
    return os.str();
}

std::string dump_cover(const OrdinalCover& c) {
    std::ostringstream os;
    os << "{\"B\": " << c.B << ", \"m\": " << c.micro.size() << ", \"micro\": [\n";
    for (size_t i = 0; i < c.micro.size(); ++i) {
        const auto& mt = c.micro[i];
        os << "  {\"root\": " << mt.nodes[0] << ", \"size\": " << mt.nodes.size() << ", \"shape\": \""
           << bp_string(mt.shape) << "\", \"shared\": " << (mt.sharedRoot ? "true" : "false")
           << ", \"edge\": " << int(mt.parentEdge) << ", \"portal\": [" << mt.portalPos << ", " << mt.portalRank
           << "]}" << (i + 1 < c.micro.size() ? ",\n" : "\n");
    }
    os << "]}\n";
    return os.str();
}

}  // namespace hst
