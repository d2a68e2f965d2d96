#include "combforge/transfer.hpp"
#include "combforge/families.hpp"

#include <cstdio>

using namespace combforge;

static void dump_dir(const char* tag, const DirectionTransferReport& r) {
    std::printf("== direction %s == identity=%d ok=%d\n", tag, int(r.identity), int(r.ok));
    for (const auto& row : r.rows)
        std::printf("  end %d scale %zu: well_defined=%d matches=%d clipped=%d\n", row.end_id,
                    row.scale, int(row.well_defined), int(row.matches_host), int(row.clipped));
    for (const auto& s : r.separations)
        std::printf("  ends %d/%d separated at %s\n", s.end_a, s.end_b,
                    s.scale ? std::to_string(*s.scale).c_str() : "never");
}

static void dump_cd(const char* tag, const ClosureDominationTransferReport& r) {
    std::printf("== closure/domination %s == ok=%d\n", tag, int(r.ok));
    for (const auto& row : r.rows)
        std::printf(
            "  end %d: closure g=%d h=%d agree=%d | dominated=%d g_fan=%d h_fan=%d tr=%d | "
            "cand=%zu sep=%zu union=%zu agree=%d clipped=%d\n",
            row.end_id, int(row.g_in_closure), int(row.h_in_closure), int(row.closure_agrees),
            int(row.declared_dominated), int(row.g_fan), int(row.h_fan),
            int(row.transferred_fan), row.candidates, row.separated, row.witness_union_size,
            int(row.domination_agrees), int(row.clipped));
}

static void dump_cover(const char* tag, const CoverTransferReport& r) {
    std::printf("== cover %s == ok=%d\n", tag, int(r.ok));
    for (const auto& row : r.rows)
        std::printf("  piece %zu: size %zu -> %zu g_star=%d h_star=%d persists=%d %s\n",
                    row.piece, row.size, row.mapped_size, int(row.g_star), int(row.h_star),
                    int(row.star_persists), row.note.c_str());
}

int main() {
    std::vector<std::size_t> scales{1, 2, 4, 8};
    std::vector<VertexId> vscales{2, 4, 8};

    {
        const auto& fam = family_spec("fan");
        const auto& g = *fam.oracle;
        BranchPartition ident("identity", {});
        BranchPartition merge("apex-merge", {{0, 1}});
        dump_dir("fan identity", direction_transfer_check(g, ident, scales, fam.default_budget));
        dump_dir("fan merge", direction_transfer_check(g, merge, scales, fam.default_budget));
        dump_cd("fan merge, U=all",
                closure_domination_transfer_check(g, merge, fam.preset("all")->u, vscales,
                                                  fam.default_budget));
        dump_cd("fan merge, U=ray-vertices",
                closure_domination_transfer_check(g, merge, fam.preset("ray-vertices")->u,
                                                  vscales, fam.default_budget));
        dump_cover("fan merge",
                   normally_spanned_transfer_check(g, merge, *fam.preset("all")->cover,
                                                   fam.default_budget, 3));
    }
    {
        const auto& fam = family_spec("grid");
        const auto& g = *fam.oracle;
        BranchPartition block("origin-block", {{0, 1, 2, 6}});
        dump_dir("grid block", direction_transfer_check(g, block, scales, fam.default_budget));
        dump_cd("grid block, U=all",
                closure_domination_transfer_check(g, block, fam.preset("all")->u, vscales,
                                                  fam.default_budget));
        dump_cover("grid block",
                   normally_spanned_transfer_check(g, block, *fam.preset("all")->cover,
                                                   fam.default_budget, 3));
    }
    {
        const auto& fam = family_spec("binary-tree");
        const auto& g = *fam.oracle;
        BranchPartition ident("identity", {});
        dump_dir("binary identity",
                 direction_transfer_check(g, ident, scales, fam.default_budget));
    }
    std::printf("smoke5 done\n");
    return 0;
}
