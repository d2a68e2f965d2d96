#include "combforge/reflecting.hpp"
#include "combforge/families.hpp"

#include <cstdio>

using namespace combforge;

static void dump(const char* tag, const ReflectingBuild& b) {
    const auto& rep = b.report;
    std::printf("== %s ==\n", tag);
    std::printf("  degenerate=%d route=%s size=%zu radius=%d\n", int(rep.degenerate),
                rep.degenerate_route.c_str(), b.tree.size(), b.tree.radius());
    std::printf("  u_cofinal=%d missed=%zu ok=%d\n", int(rep.u_cofinal), rep.missed_u.size(),
                int(rep.ok));
    for (const auto& row : rep.ends)
        std::printf("  end %d: undominated=%d scales=%zu seps_in_tree=%d nested=%d tracked=%d\n",
                    row.end_id, int(row.undominated), row.scales_checked,
                    int(row.separators_in_tree), int(row.prefix_nested), int(row.tracked));
    for (const auto& s : rep.stages) std::printf("  stage: %s\n", s.c_str());
}

int main() {
    {
        const auto& fam = family_spec("ray");
        auto dd = fam.decomposition(8);
        const Preset& preset = *fam.preset("all");
        auto out = build_reflecting_tree(*fam.oracle, preset.u, preset.cover, dd,
                                         fam.default_budget);
        if (!ok(out)) {
            std::printf("ray/all EXHAUSTED: %s\n", exhausted(out).detail.c_str());
            return 1;
        }
        dump("ray/all", value(out));
        // the tree should be an initial segment of the ray: every vertex's parent is v-1
        const auto& t = value(out).tree;
        bool path_shaped = true;
        for (VertexId v : t.order())
            if (v != t.root() && t.parent(v) != v - 1) path_shaped = false;
        std::printf("  path_shaped=%d root=%llu\n", int(path_shaped),
                    (unsigned long long)t.root());
    }
    {
        const auto& fam = family_spec("grid");
        auto dd = fam.decomposition(10);
        const Preset& preset = *fam.preset("all");
        auto out = build_reflecting_tree(*fam.oracle, preset.u, preset.cover, dd,
                                         fam.default_budget);
        if (!ok(out)) {
            std::printf("grid/all EXHAUSTED: %s\n", exhausted(out).detail.c_str());
            return 1;
        }
        dump("grid/all", value(out));
    }
    {
        const auto& fam = family_spec("fan");
        auto dd = fam.decomposition(6);
        const Preset& preset = *fam.preset("all");
        auto out = build_reflecting_tree(*fam.oracle, preset.u, preset.cover, dd,
                                         fam.default_budget);
        if (!ok(out)) {
            std::printf("fan/all EXHAUSTED: %s\n", exhausted(out).detail.c_str());
            return 1;
        }
        dump("fan/all", value(out));
        const auto& t = value(out).tree;
        std::size_t at0 = 0, deeper = 0;
        for (VertexId v : t.order())
            (t.height(v) <= 1 ? at0 : deeper)++;
        std::printf("  height<=1=%zu deeper=%zu\n", at0, deeper);
    }
    std::printf("smoke4 done\n");
    return 0;
}
