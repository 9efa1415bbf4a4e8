#include "hst/hypercodec.hpp"

#include <algorithm>
#include <map>

namespace hst {

namespace {

struct Sections {
    size_t header = 0, top = 0, codebook = 0, codewords = 0, portals = 0, edges = 0, unrestricted = 0;
};

void write_codebook(BitBuf& out, const ShapeCode& code) {
    gamma_encode(out, code.size() + 1);
    for (size_t i = 0; i < code.size(); ++i) {
        const std::string& bp = code.alphabet[i];
        gamma_encode(out, bp.size() / 2 + 1);
        for (char ch : bp) out.push_bit(ch == '(');
        gamma_encode(out, code.codeLen[i] + 1);
    }
}

std::string read_bp_text(BitReader& in, size_t s) {
    if (in.remaining() < 2 * s) throw MalformedStream("bit stream truncated");
    std::string bp(2 * s, ')');
    for (size_t k = 0; k < 2 * s; ++k)
        if (in.read_bit()) bp[k] = '(';
    return bp;
}

uint64_t read_count(BitReader& in, uint64_t limit, const char* what) {
    uint64_t v = gamma_decode(in);
    if (v - 1 > limit) throw MalformedStream(std::string(what) + " out of range");
    return v - 1;
}

ShapeCode read_codebook(BitReader& in, size_t maxShape) {
    size_t k = read_count(in, in.remaining(), "codebook size");
    std::vector<std::string> alphabet;
    std::vector<uint32_t> lens;
    for (size_t i = 0; i < k; ++i) {
        size_t s = read_count(in, maxShape, "shape size");
        if (s == 0) throw MalformedStream("empty shape in codebook");
        alphabet.push_back(read_bp_text(in, s));
        lens.push_back(uint32_t(read_count(in, 64, "codeword length")));
    }
    return shape_code_from_lengths(std::move(alphabet), std::move(lens));
}

// reads one restricted codeword, returns the BP text of the shape
std::string read_restricted(BitReader& in, const ShapeCode& code, size_t maxShape) {
    if (in.read_bit()) {
        if (code.size() == 0) throw MalformedStream("codeword without a codebook");
        return code.alphabet[code.decode(in)];
    }
    size_t s = read_count(in, maxShape, "shape size");
    if (s == 0) throw MalformedStream("empty escaped shape");
    return read_bp_text(in, s);
}

void check_tail(const BitReader& in) {
    size_t rest = in.remaining();
    if (rest >= 8) throw MalformedStream("trailing data after the encoding");
    for (size_t i = in.pos(); i < in.buf().size(); ++i)
        if (in.buf().get(i)) throw MalformedStream("non-zero padding");
}

void fill_report(SpaceReport* r, size_t n, size_t m, size_t B, const Sections& s, size_t total) {
    if (!r) return;
    r->n = n;
    r->m = m;
    r->B = B;
    r->header = s.header;
    r->topTierBP = s.top;
    r->codebook = s.codebook;
    r->codewords = s.codewords;
    r->portals = s.portals;
    r->edgeTypes = s.edges;
    r->unrestricted = s.unrestricted;
    r->total = total;
}

}  // namespace

HsBlob hs_encode_binary(const BinaryTree& t, std::optional<size_t> Bopt, SpaceReport* report) {
    size_t n = t.size();
    HsBlob blob;
    blob.kind = TreeKind::kBinary;
    BitBuf& out = blob.bits;
    Sections sec;
    if (n == 0) {
        gamma_encode(out, 1);
        gamma_encode(out, 1);
        sec.header = out.size();
        fill_report(report, 0, 0, Bopt.value_or(1), sec, out.size());
        return blob;
    }
    size_t B = Bopt.value_or(default_block(n));
    BinaryCover cover = decompose_binary(t, B);
    size_t m = cover.micro.size();
    std::vector<std::string> names(m);
    size_t mu = 0;
    for (size_t i = 0; i < m; ++i) {
        names[i] = bp_string(cover.micro[i].shape);
        mu = std::max(mu, cover.micro[i].shape.size());
    }
    ShapeCode code = build_shape_code(names);

    gamma_encode(out, n + 1);
    gamma_encode(out, m + 1);
    sec.header = out.size();
    out.append(bp_encode(cover.top));
    sec.top = out.size() - sec.header;
    size_t mark = out.size();
    write_codebook(out, code);
    sec.codebook = out.size() - mark;
    mark = out.size();
    std::vector<BitBuf> cache(code.size());
    std::vector<bool> cached(code.size(), false);
    for (size_t i = 0; i < m; ++i) {
        size_t k = size_t(code.index_of(names[i]));
        if (!cached[k]) {
            cache[k] = restrict(code, names[i]);
            cached[k] = true;
        }
        out.append(cache[k]);
        sec.unrestricted += code.codeLen[k];
    }
    sec.codewords = out.size() - mark;
    mark = out.size();
    unsigned w = bit_width_of(mu + 1);
    for (const auto& mt : cover.micro) {
        out.push_bits(uint64_t(mt.leftPortal + 1), w);
        out.push_bits(uint64_t(mt.rightPortal + 1), w);
    }
    sec.portals = out.size() - mark;
    fill_report(report, n, m, B, sec, out.size());
    return blob;
}

BinaryBlobView parse_binary_blob(const HsBlob& blob) {
    if (blob.kind != TreeKind::kBinary) throw MalformedStream("not a binary-tree encoding");
    BitReader in(blob.bits);
    BinaryBlobView v;
    v.n = read_count(in, uint64_t(1) << 40, "node count");
    v.m = read_count(in, v.n, "micro-tree count");
    if (v.n == 0) {
        if (v.m != 0) throw MalformedStream("micro trees in an empty tree");
        check_tail(in);
        return v;
    }
    if (v.m == 0) throw MalformedStream("no micro trees");
    if (in.remaining() < 2 * v.m) throw MalformedStream("bit stream truncated");
    v.top = bp_decode_binary(in, v.m);
    v.code = read_codebook(in, v.n);

    std::map<std::string, uint32_t> shapeIdx;
    v.shapeOf.resize(v.m);
    v.codewordStart.resize(v.m + 1);
    for (size_t i = 0; i < v.m; ++i) {
        v.codewordStart[i] = in.pos();
        std::string bp = read_restricted(in, v.code, v.n);
        auto [it, fresh] = shapeIdx.emplace(bp, uint32_t(v.shapes.size()));
        if (fresh) {
            BinaryTree shape;
            try {
                shape = parse_binary_bp(bp);
            } catch (const MalformedInput& e) {
                throw MalformedStream(std::string("bad micro shape: ") + e.what());
            }
            v.shapes.emplace_back(shape);
        }
        v.shapeOf[i] = it->second;
        v.mu = std::max(v.mu, v.shapes[it->second].size());
    }
    v.codewordStart[v.m] = in.pos();

    unsigned w = bit_width_of(v.mu + 1);
    v.leftPortal.resize(v.m);
    v.rightPortal.resize(v.m);
    for (size_t i = 0; i < v.m; ++i) {
        size_t s = v.shapes[v.shapeOf[i]].size();
        int64_t pl = int64_t(in.read_bits(w)) - 1;
        int64_t pr = int64_t(in.read_bits(w)) - 1;
        if (pl > int64_t(s) || pr > int64_t(s)) throw MalformedStream("portal outside its micro tree");
        NodeId u = NodeId(i + 1);
        if ((pl >= 0) != (v.top.left(u) != 0) || (pr >= 0) != (v.top.right(u) != 0))
            throw MalformedStream("portals disagree with the top tier");
        if (pl >= 0 && pr >= 0 && pl >= pr) throw MalformedStream("portals out of order");
        v.leftPortal[i] = int32_t(pl);
        v.rightPortal[i] = int32_t(pr);
    }
    check_tail(in);
    return v;
}

BinaryLayout layout_binary(const BinaryBlobView& v) {
    size_t m = v.m;
    BinaryLayout L;
    L.rootPre.assign(m, 0);
    L.inStart.assign(m, 0);
    L.total.assign(m, 0);
    L.leftSize.assign(m, 0);
    L.rightSize.assign(m, 0);
    if (m == 0) return L;
    // top-tier preorder: children have larger ids, so a reverse sweep gives subtree totals
    for (size_t i = m; i-- > 0;) {
        NodeId u = NodeId(i + 1);
        uint64_t sl = v.top.left(u) ? L.total[v.top.left(u) - 1] : 0;
        uint64_t sr = v.top.right(u) ? L.total[v.top.right(u) - 1] : 0;
        L.leftSize[i] = sl;
        L.rightSize[i] = sr;
        L.total[i] = v.shapes[v.shapeOf[i]].size() + sl + sr;
    }
    if (L.total[0] != v.n) throw MalformedStream("micro-tree sizes do not add up to n");
    L.rootPre[0] = 1;
    L.inStart[0] = 1;
    for (size_t i = 0; i < m; ++i) {
        NodeId u = NodeId(i + 1);
        const BinaryShapeInfo& S = v.shapes[v.shapeOf[i]];
        int64_t pl = v.leftPortal[i], pr = v.rightPortal[i];
        uint64_t sl = L.leftSize[i], sr = L.rightSize[i];
        if (NodeId c = v.top.left(u)) {
            uint64_t extra = (pr >= 0 && pr < pl) ? sr : 0;
            L.rootPre[c - 1] = L.rootPre[i] + S.preBeforeNull[size_t(pl)] + extra;
            L.inStart[c - 1] = L.inStart[i] + uint64_t(pl) + extra;
        }
        if (NodeId c = v.top.right(u)) {
            uint64_t extra = (pl >= 0 && pl < pr) ? sl : 0;
            L.rootPre[c - 1] = L.rootPre[i] + S.preBeforeNull[size_t(pr)] + extra;
            L.inStart[c - 1] = L.inStart[i] + uint64_t(pr) + extra;
        }
    }
    return L;
}

BinaryTree hs_decode_binary(const HsBlob& blob) {
    BinaryBlobView v = parse_binary_blob(blob);
    if (v.n == 0) return BinaryTree();
    BinaryLayout L = layout_binary(v);
    std::vector<NodeId> left(v.n + 1, 0), right(v.n + 1, 0);
    std::vector<uint64_t> g;
    for (size_t i = 0; i < v.m; ++i) {
        NodeId u = NodeId(i + 1);
        const BinaryShapeInfo& S = v.shapes[v.shapeOf[i]];
        int64_t pl = v.leftPortal[i], pr = v.rightPortal[i];
        size_t s = S.size();
        g.resize(s);
        for (uint32_t j = 0; j < s; ++j) {
            int64_t lo = S.nullLo[j];
            g[j] = L.rootPre[i] + j + (pl >= 0 && pl < lo ? L.leftSize[i] : 0) + (pr >= 0 && pr < lo ? L.rightSize[i] : 0);
            if (g[j] > v.n) throw MalformedStream("node outside the tree");
        }
        for (uint32_t j = 0; j < s; ++j) {
            NodeId x = NodeId(g[j]);
            int64_t ln = S.in0[j], rn = S.in0[j] + 1;
            if (S.left0[j] >= 0)
                left[x] = NodeId(g[size_t(S.left0[j])]);
            else if (ln == pl)
                left[x] = NodeId(L.rootPre[v.top.left(u) - 1]);
            else if (ln == pr)
                left[x] = NodeId(L.rootPre[v.top.right(u) - 1]);
            if (S.right0[j] >= 0)
                right[x] = NodeId(g[size_t(S.right0[j])]);
            else if (rn == pl)
                right[x] = NodeId(L.rootPre[v.top.left(u) - 1]);
            else if (rn == pr)
                right[x] = NodeId(L.rootPre[v.top.right(u) - 1]);
        }
    }
    try {
        return BinaryTree(std::move(left), std::move(right));
    } catch (const std::exception& e) {
        throw MalformedStream(std::string("decoded tree is inconsistent: ") + e.what());
    }
}

HsBlob hs_encode_ordinal(const OrdinalTree& t, std::optional<size_t> Bopt, SpaceReport* report) {
    size_t n = t.size();
    size_t B = Bopt.value_or(default_block(n));
    OrdinalCover cover = decompose_ordinal(t, B);
    size_t m = cover.micro.size();
    HsBlob blob;
    blob.kind = TreeKind::kOrdinal;
    BitBuf& out = blob.bits;
    Sections sec;
    std::vector<std::string> names(m);
    size_t mu = 0;
    for (size_t i = 0; i < m; ++i) {
        names[i] = bp_string(cover.micro[i].shape);
        mu = std::max(mu, cover.micro[i].shape.size());
    }
    ShapeCode code = build_shape_code(names);

    gamma_encode(out, n + 1);
    gamma_encode(out, m + 1);
    sec.header = out.size();
    out.append(bp_encode(cover.top));
    sec.top = out.size() - sec.header;
    size_t mark = out.size();
    write_codebook(out, code);
    sec.codebook = out.size() - mark;
    mark = out.size();
    for (size_t i = 0; i < m; ++i) {
        out.append(restrict(code, names[i]));
        sec.unrestricted += code.codeLen[size_t(code.index_of(names[i]))];
    }
    sec.codewords = out.size() - mark;
    mark = out.size();
    unsigned w = bit_width_of(mu);
    for (const auto& mt : cover.micro) {
        if (mt.portalPos < 0) {
            out.push_bits(0, w);
            out.push_bits(0, w);
        } else {
            out.push_bits(uint64_t(mt.portalPos + 1), w);
            out.push_bits(uint64_t(mt.portalRank), w);
        }
    }
    sec.portals = out.size() - mark;
    mark = out.size();
    for (const auto& mt : cover.micro) out.push_bits(uint64_t(mt.parentEdge), 3);
    sec.edges = out.size() - mark;
    fill_report(report, n, m, B, sec, out.size());
    return blob;
}

OrdinalTree hs_decode_ordinal(const HsBlob& blob) {
    if (blob.kind != TreeKind::kOrdinal) throw MalformedStream("not an ordinal-tree encoding");
    BitReader in(blob.bits);
    size_t n = read_count(in, uint64_t(1) << 40, "node count");
    size_t m = read_count(in, n, "micro-tree count");
    if (n == 0 || m == 0) throw MalformedStream("empty ordinal tree");
    if (in.remaining() < 2 * m + 2) throw MalformedStream("bit stream truncated");
    OrdinalTree top = bp_decode_ordinal(in, m + 1);
    if (!top.is_tree()) throw MalformedStream("top tier is not a tree");
    ShapeCode code = read_codebook(in, n);

    std::map<std::string, uint32_t> shapeIdx;
    std::vector<OrdinalTree> shapes;
    std::vector<uint32_t> shapeOf(m);
    size_t mu = 0;
    for (size_t i = 0; i < m; ++i) {
        std::string bp = read_restricted(in, code, n);
        auto [it, fresh] = shapeIdx.emplace(bp, uint32_t(shapes.size()));
        if (fresh) {
            OrdinalTree s;
            try {
                s = parse_ordinal_bp(bp);
            } catch (const MalformedInput& e) {
                throw MalformedStream(std::string("bad micro shape: ") + e.what());
            }
            if (!s.is_tree()) throw MalformedStream("micro shape is not a tree");
            shapes.push_back(std::move(s));
        }
        shapeOf[i] = it->second;
        mu = std::max(mu, shapes[it->second].size());
    }
    unsigned w = bit_width_of(mu);
    std::vector<int32_t> ppos(m, -1), prank(m, -1);
    for (size_t i = 0; i < m; ++i) {
        uint64_t a = in.read_bits(w), b = in.read_bits(w);
        if (a == 0) {
            if (b != 0) throw MalformedStream("portal rank without a position");
            continue;
        }
        const OrdinalTree& s = shapes[shapeOf[i]];
        if (a > s.size() || b > s.degree(NodeId(a))) throw MalformedStream("portal outside its micro tree");
        ppos[i] = int32_t(a - 1);
        prank[i] = int32_t(b);
    }
    std::vector<uint8_t> etype(m);
    for (size_t i = 0; i < m; ++i) {
        etype[i] = uint8_t(in.read_bits(3));
        if (etype[i] > kExternalChild) throw MalformedStream("unknown edge type");
    }
    check_tail(in);

    // assemble with explicit node objects, then renumber in preorder
    std::vector<std::vector<uint32_t>> kids;
    kids.reserve(n);
    auto make = [&]() {
        if (kids.size() >= n) throw MalformedStream("more nodes than announced");
        kids.emplace_back();
        return uint32_t(kids.size() - 1);
    };
    std::vector<int64_t> rootNode(m, -1);
    std::vector<uint32_t> local;
    // Υ node u: dummy is 1, micro i is i+2; ids are Υ preorder
    for (size_t u = 1; u <= m + 1; ++u) {
        bool dummy = u == 1;
        size_t i = u - 2;
        std::vector<uint32_t> leftNew, rightNew;
        int64_t ext = -1, lastL = -1, lastR = -1;
        for (const NodeId* c = top.children_begin(NodeId(u)); c != top.children_end(NodeId(u)); ++c) {
            size_t ci = *c - 2;
            switch (etype[ci]) {
                case kNewLeftmost:
                    if (dummy) throw MalformedStream("leftmost edge from the dummy root");
                    lastL = make();
                    leftNew.push_back(uint32_t(lastL));
                    rootNode[ci] = lastL;
                    break;
                case kContinuedLeftmost:
                    if (lastL < 0) throw MalformedStream("continued edge without a new one");
                    rootNode[ci] = lastL;
                    break;
                case kNewRightmost:
                    if (dummy && lastR >= 0) throw MalformedStream("two roots under the dummy");
                    lastR = make();
                    rightNew.push_back(uint32_t(lastR));
                    rootNode[ci] = lastR;
                    break;
                case kContinuedRightmost:
                    if (lastR < 0) throw MalformedStream("continued edge without a new one");
                    rootNode[ci] = lastR;
                    break;
                default:
                    if (dummy || ppos[i] < 0) throw MalformedStream("external edge without a portal");
                    if (ext < 0) ext = make();
                    rootNode[ci] = ext;
            }
        }
        if (dummy) continue;
        if (rootNode[i] < 0) throw MalformedStream("micro tree without a root");
        if (ppos[i] >= 0 && ext < 0) throw MalformedStream("portal without an external child");
        const OrdinalTree& s = shapes[shapeOf[i]];
        local.assign(s.size() + 1, 0);
        local[1] = uint32_t(rootNode[i]);
        for (NodeId x = 2; x <= s.size(); ++x) local[x] = make();
        for (NodeId x = 1; x <= s.size(); ++x) {
            std::vector<uint32_t> list;
            if (x == 1) list = leftNew;
            size_t k = 0;
            for (const NodeId* c = s.children_begin(x); c != s.children_end(x) + 1; ++c, ++k) {
                if (ppos[i] == int32_t(x - 1) && prank[i] == int32_t(k)) list.push_back(uint32_t(ext));
                if (c == s.children_end(x)) break;
                list.push_back(local[*c]);
            }
            if (x == 1) list.insert(list.end(), rightNew.begin(), rightNew.end());
            auto& dst = kids[local[x]];
            dst.insert(dst.end(), list.begin(), list.end());
        }
    }
    if (kids.size() != n) throw MalformedStream("node count mismatch");
    if (rootNode[top.child(1, 0) - 2] != 0) throw MalformedStream("first micro tree does not hold the root");

    std::vector<NodeId> id(n, 0), parent(n + 1, 0);
    std::vector<std::pair<uint32_t, size_t>> st{{0u, 0}};
    NodeId next = 1;
    id[0] = next++;
    while (!st.empty()) {
        auto& [x, k] = st.back();
        if (k == kids[x].size()) {
            st.pop_back();
            continue;
        }
        uint32_t c = kids[x][k++];
        if (id[c]) throw MalformedStream("node reached twice");
        id[c] = next++;
        parent[id[c]] = id[x];
        st.push_back({c, 0});
    }
    if (next != n + 1) throw MalformedStream("disconnected nodes");
    return OrdinalTree::from_parents(parent);
}

SpaceReport space_report(const BinaryTree& t, std::optional<size_t> B) {
    SpaceReport r;
    hs_encode_binary(t, B, &r);
    return r;
}

SpaceReport space_report(const OrdinalTree& t, std::optional<size_t> B) {
    SpaceReport r;
    hs_encode_ordinal(t, B, &r);
    return r;
}

std::vector<uint8_t> blob_to_bytes(const HsBlob& blob) {
    std::vector<uint8_t> out{'H', 'S', 'T', '1', uint8_t(blob.kind)};
    const auto& b = blob.bits.bytes();
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

HsBlob blob_from_bytes(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < 5 || bytes[0] != 'H' || bytes[1] != 'S' || bytes[2] != 'T' || bytes[3] != '1')
        throw MalformedStream("missing HST1 magic");
    if (bytes[4] > 1) throw MalformedStream("unknown tree kind");
    HsBlob blob;
    blob.kind = TreeKind(bytes[4]);
    std::vector<uint8_t> body(bytes.begin() + 5, bytes.end());
    size_t len = body.size() * 8;
    blob.bits = BitBuf::from_bytes(std::move(body), len);
    return blob;
}

}  // namespace hst
