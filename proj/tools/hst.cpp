#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "hst/hypercodec.hpp"
#include "hst/rmq.hpp"
#include "hst/sources.hpp"

using namespace hst;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<uint8_t> read_bytes(const std::string& path) {
    std::string s = read_text(path);
    return {s.begin(), s.end()};
}

void write_text(const std::string& path, const std::string& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << s;
}

std::string strip_ws(const std::string& s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
    return out;
}

SourceModel source_or_usage(const std::string& desc) {
    try {
        return parse_source(desc);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

std::optional<size_t> block_opt(size_t B) {
    return B ? std::optional<size_t>(B) : std::nullopt;
}

json space_json(const SpaceReport& r) {
    return {{"n", r.n},           {"m", r.m},         {"B", r.B},
            {"header", r.header}, {"topTierBP", r.topTierBP}, {"codebook", r.codebook},
            {"codewords", r.codewords}, {"portals", r.portals}, {"edgeTypes", r.edgeTypes},
            {"unrestrictedCodewords", r.unrestricted}, {"total", r.total},
            {"bitsPerNode", r.n ? double(r.total) / double(r.n) : 0.0}};
}

// FNV-1a over the replicate coordinates, so the stream does not depend on scheduling
uint64_t replicate_seed(uint64_t seed, const std::string& source, uint64_t n, uint64_t rep) {
    uint64_t h = 1469598103934665603ULL;
    auto mix = [&](const void* p, size_t len) {
        auto* b = static_cast<const uint8_t*>(p);
        for (size_t k = 0; k < len; ++k) {
            h ^= b[k];
            h *= 1099511628211ULL;
        }
    };
    mix(&seed, sizeof seed);
    mix(source.data(), source.size());
    mix(&n, sizeof n);
    mix(&rep, sizeof rep);
    return h;
}

std::string fmt6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

int run_bench(const std::string& desc, const std::vector<size_t>& sizes, uint64_t seed, size_t reps, size_t B,
              const std::string& csvPath) {
    SourceModel s = source_or_usage(desc);
    std::ostringstream csv;
    csv << "source,n,replicate,seed,B,m,header,topTierBP,codebook,codewords,portals,edgeTypes,bitsTotal,"
           "bitsPerNode,huffmanBitsPerNode,logProbBits,entropyPerNode\n";
    for (size_t n : sizes) {
        for (size_t rep = 0; rep < reps; ++rep) {
            uint64_t rs = replicate_seed(seed, desc, n, rep);
            std::mt19937_64 rng(rs);
            SpaceReport r;
            double lp;
            size_t nodes;
            if (s.binary()) {
                BinaryTree t = sample_binary(s, n, rng);
                hs_encode_binary(t, block_opt(B), &r);
                lp = log_prob(s, t).logProbBits;
                nodes = t.size();
            } else {
                OrdinalTree t = sample_ordinal(s, n, rng);
                hs_encode_ordinal(t, block_opt(B), &r);
                lp = log_prob(s, t).logProbBits;
                nodes = t.size();
            }
            double dn = double(std::max<size_t>(nodes, 1));
            csv << desc << ',' << nodes << ',' << rep << ',' << rs << ',' << r.B << ',' << r.m << ',' << r.header << ','
                << r.topTierBP << ',' << r.codebook << ',' << r.codewords << ',' << r.portals << ',' << r.edgeTypes
                << ',' << r.total << ',' << fmt6(double(r.total) / dn) << ',' << fmt6(double(r.codewords) / dn)
                << ',' << fmt6(lp) << ',' << fmt6(lp / dn) << '\n';
        }
    }
    if (csvPath.empty() || csvPath == "-")
        std::cout << csv.str();
    else
        write_text(csvPath, csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypersuccinct tree codec"};
    app.require_subcommand(1);

    std::string kind = "binary", in, out, source, csvPath, sizesArg;
    size_t block = 0, size = 0, count = 1, reps = 1;
    unsigned order = 0;
    uint64_t seed = 0, qi = 0, qj = 0;
    std::string pairsPath;

    auto* enc = app.add_subcommand("encode", "BP text to .hst blob");
    enc->add_option("--kind", kind)->check(CLI::IsMember({"binary", "ordinal"}));
    enc->add_option("--block", block, "micro tree parameter B (0 = default)");
    enc->add_option("IN", in)->required();
    enc->add_option("OUT", out)->required();

    auto* dec = app.add_subcommand("decode", ".hst blob to BP text");
    dec->add_option("IN", in)->required();
    dec->add_option("OUT", out)->required();

    auto* smp = app.add_subcommand("sample", "draw trees from a source, one BP string per line");
    smp->add_option("--source", source)->required();
    smp->add_option("--size", size, "node count, or height for avl-height")->required();
    smp->add_option("--seed", seed)->required();
    smp->add_option("--count", count);

    auto* ana = app.add_subcommand("analyze", "entropies, log-probability and space report as JSON");
    ana->add_option("--source", source)->required();
    ana->add_option("--order", order);
    ana->add_option("--block", block);
    ana->add_option("IN", in)->required();

    auto* rmq = app.add_subcommand("rmq", "range-minimum index over an integer array");
    rmq->require_subcommand(1);
    auto* rb = rmq->add_subcommand("build", "array text to .hst blob of its Cartesian tree");
    rb->add_option("--block", block);
    rb->add_option("ARRAY", in)->required();
    rb->add_option("OUT", out)->required();
    auto* rq = rmq->add_subcommand("query", "answer argmin queries from a built index");
    rq->add_option("INDEX", in)->required();
    rq->add_option("I", qi);
    rq->add_option("J", qj);
    rq->add_option("--pairs", pairsPath, "file of 'i j' lines");
    auto* rr = rmq->add_subcommand("runs", "runs profile and Narayana bound as JSON");
    rr->add_option("ARRAY", in)->required();

    auto* bch = app.add_subcommand("bench", "CSV space report over sampled trees");
    bch->add_option("--source", source)->required();
    bch->add_option("--sizes", sizesArg, "comma-separated sizes")->required();
    bch->add_option("--seed", seed)->required();
    bch->add_option("--reps", reps);
    bch->add_option("--block", block);
    bch->add_option("--csv", csvPath);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*enc) {
            std::string text = strip_ws(read_text(in));
            HsBlob b = kind == "binary" ? hs_encode_binary(parse_binary_bp(text), block_opt(block))
                                        : hs_encode_ordinal(parse_ordinal_bp(text), block_opt(block));
            auto bytes = blob_to_bytes(b);
            write_text(out, std::string(bytes.begin(), bytes.end()));
        } else if (*dec) {
            HsBlob b = blob_from_bytes(read_bytes(in));
            std::string bp = b.kind == TreeKind::kBinary ? bp_string(hs_decode_binary(b)) : bp_string(hs_decode_ordinal(b));
            write_text(out, bp + "\n");
        } else if (*smp) {
            SourceModel s = source_or_usage(source);
            std::mt19937_64 rng(seed);
            for (size_t k = 0; k < count; ++k)
                std::cout << (s.binary() ? bp_string(sample_binary(s, size, rng)) : bp_string(sample_ordinal(s, size, rng)))
                          << '\n';
        } else if (*ana) {
            SourceModel s = source_or_usage(source);
            std::string text = strip_ws(read_text(in));
            json j;
            j["source"] = s.name;
            if (s.binary()) {
                BinaryTree t = parse_binary_bp(text);
                EntropyReport e = log_prob(s, t);
                j["n"] = t.size();
                j["logProbBits"] = e.logProbBits;
                j["logProbPerNode"] = e.perNode;
                j["typeEntropyBits"] = type_entropy(t, order);
                j["order"] = order;
                j["space"] = space_json(space_report(t, block_opt(block)));
            } else {
                OrdinalTree t = parse_ordinal_bp(text);
                EntropyReport e = log_prob(s, t);
                j["n"] = t.size();
                j["logProbBits"] = e.logProbBits;
                j["logProbPerNode"] = e.perNode;
                j["degreeEntropyBits"] = degree_entropy(t);
                j["shapeEntropyBits"] = shape_entropy(t, order);
                j["order"] = order;
                j["space"] = space_json(space_report(t, block_opt(block)));
            }
            std::cout << j.dump(2) << '\n';
        } else if (*rb) {
            auto A = parse_array(read_text(in));
            if (A.empty()) throw MalformedInput("empty array");
            RMQIndex idx(A, block_opt(block));
            auto bytes = blob_to_bytes(idx.blob());
            write_text(out, std::string(bytes.begin(), bytes.end()));
        } else if (*rq) {
            RMQIndex idx(blob_from_bytes(read_bytes(in)));
            auto answer = [&](uint64_t i, uint64_t j) {
                if (i < 1 || j > idx.size() || i > j) throw UsageError("query interval out of range");
                std::cout << idx.query(i, j) << '\n';
            };
            if (!pairsPath.empty()) {
                std::istringstream ps(read_text(pairsPath));
                uint64_t i, j;
                while (ps >> i >> j) answer(i, j);
                if (!ps.eof()) throw MalformedInput("pairs file: expected 'i j' lines");
            } else {
                if (rq->count("I") == 0 || rq->count("J") == 0) throw UsageError("need I J or --pairs");
                answer(qi, qj);
            }
        } else if (*rr) {
            auto A = parse_array(read_text(in));
            if (A.empty()) throw MalformedInput("empty array");
            RunsProfile p = runs_profile(A);
            BinaryTree t = cartesian_tree(A);
            SpaceReport sr = space_report(t);
            json j{{"n", p.n},
                   {"r", p.r},
                   {"s", p.s},
                   {"boundBits", p.boundBits},
                   {"narayanaBits", p.narayanaBits},
                   {"typeEntropyBits", type_entropy(t, 0)},
                   {"blobBits", sr.total}};
            std::cout << j.dump(2) << '\n';
        } else if (*bch) {
            std::vector<size_t> sizes;
            std::stringstream ss(sizesArg);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                try {
                    size_t used = 0;
                    unsigned long long v = std::stoull(tok, &used);
                    if (used != tok.size() || v == 0) throw std::invalid_argument(tok);
                    sizes.push_back(size_t(v));
                } catch (const std::exception&) {
                    throw UsageError("bad size: " + tok);
                }
            }
            if (sizes.empty() || reps == 0) throw UsageError("need at least one size and replicate");
            return run_bench(source, sizes, seed, reps, block, csvPath);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
