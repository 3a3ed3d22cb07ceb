#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tnsketch/embedding.hpp"
#include "tnsketch/experiments.hpp"

using namespace tnsketch;

namespace {

SketchSpec kron_spec(int order, std::int64_t s, std::int64_t m, std::uint64_t seed) {
    SketchSpec spec;
    spec.data = kronecker_network(order, s, seed);
    spec.sketch_edges = default_sketch_edges(spec.data);
    spec.sketch_size = m;
    return spec;
}

SketchSpec tt_spec(int order, std::int64_t s, std::int64_t r, std::int64_t m,
                   std::uint64_t seed, bool drop_last = false) {
    SketchSpec spec;
    spec.data = tensor_train_network(order, s, r, seed);
    spec.sketch_edges = default_sketch_edges(spec.data, drop_last);
    spec.sketch_size = m;
    return spec;
}

// |exec - S*x| / |S*x| against the reference materialization path.
double oracle_relative_error(const SketchSpec& spec, const ContractionTree& t0,
                             EmbeddingKind kind, RandomSource rng) {
    auto [emb, plan] = build_embedding(kind, spec, t0);
    const ExecutionResult exec = execute_plan(plan, spec, emb, rng);
    const DenseTensor smat = materialize_dense(emb, rng);
    const DenseTensor x = materialize_dense(spec.data);
    const DenseTensor sx = naive_contract_dense(smat, x, spec.sketch_edges, {});
    const DenseTensor aligned = permuted(exec.tensor, sx.mode_labels);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < sx.values.size(); ++i) {
        const double d = aligned.values[i] - sx.values[i];
        num += d * d;
        den += sx.values[i] * sx.values[i];
    }
    return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

int count_steps(const SketchPlan& plan, PlanStep::Kind kind) {
    int c = 0;
    for (const auto& s : plan.steps)
        if (s.kind == kind) ++c;
    return c;
}

}  // namespace

TEST_CASE("zi_internal_edge: closed forms and clamping") {
    // a=b=c=d=1: alpha = round(sqrt(m))
    CHECK(zi_internal_edge(1, 1, 1, 1, 25) == 5);
    CHECK(zi_internal_edge(1, 1, 1, 1, 16) == 4);
    // c = 4m, b = 1: clamped to m
    CHECK(zi_internal_edge(1, 1, 4 * 16, 1, 16) == 16);
    // b >= c*m: driven to 1
    CHECK(zi_internal_edge(1, BigInt(16) * 16, 1, 1, 16) == 1);
    // mirrored case uses the larger of a, c
    CHECK(zi_internal_edge(4 * 16, 1, 1, 1, 16) == 16);
}

TEST_CASE("zi grid: every small-network step cost stays within 2*y") {
    const std::vector<std::int64_t> grid{1, 4, 16, 256, 4096, 65536};
    for (std::int64_t a : grid) {
        for (std::int64_t b : grid) {
            for (std::int64_t c : grid) {
                for (std::int64_t d : {1, 16}) {
                    for (std::int64_t m : {1, 4, 16, 64, 1024}) {
                        const std::int64_t alpha = zi_internal_edge(a, b, c, d, m);
                        ContractionLabels l;
                        l.a = a; l.b = b; l.c = c; l.d = d;
                        const BigInt y = y_cost(l, m);
                        const BigInt small = std::min(a, c), big = std::max(a, c);
                        // contraction sequence of the Fig-8 style merge
                        const BigInt t1 = small * b * d * m * m * alpha;
                        const BigInt t2 = BigInt(a) * b * c * d * m * alpha;
                        const BigInt t3 = big * d * m * alpha;
                        CHECK(t1 <= 2 * y);
                        CHECK(t2 <= 2 * y);
                        CHECK(t3 <= 2 * y);
                    }
                }
            }
        }
    }
}

TEST_CASE("alg1 on Kronecker data: plan shape and modeled cost") {
    const SketchSpec spec = kron_spec(3, 1000, 25, 41);
    const auto t0 = default_tree(spec.data);
    auto [emb, plan] = build_alg1_embedding(spec, t0);

    // 3 matrix sketches + 2 small-network merges
    CHECK(count_steps(plan, PlanStep::Kind::ContractSketch) == 5);
    int s_steps = 0;
    for (const auto& s : plan.steps)
        if (s.stage == PlanStage::S) ++s_steps;
    CHECK(s_steps == 2);

    // modeled cost within a constant of sum(s_j m) + N m^2.5
    const BigInt reference = BigInt(3) * 1000 * 25 + BigInt(3) * 25 * 25 * 5;
    CHECK(plan.total_flops >= reference);
    CHECK(plan.total_flops <= reference * 4);

    // Kronecker bucket is exactly 2 * sum(s_j m)
    CHECK(plan.flops_kron == BigInt(2) * 3 * 1000 * 25);

    // the embedding has one m-sized output and attaches to all sketch edges
    CHECK(emb.output_edges.size() == 1);
    CHECK(emb.network.edge(emb.output_edges[0]).size == 25);
    CHECK(emb.attach_edges == spec.sketch_edges);
}

TEST_CASE("alg1 on tensor-train data: S-step cost matches y per contraction") {
    // Rounding-style matricization: the last physical edge stays free, so the
    // middle merges carry labels (1, R, R, 1).
    const std::int64_t r = 6, m = 16, s = 32;
    const SketchSpec spec = tt_spec(4, s, r, m, 42, /*drop_last=*/true);
    const auto t0 = default_tree(spec.data);
    auto [emb, plan] = build_alg1_embedding(spec, t0);

    ContractionLabels l;
    l.a = 1; l.b = r; l.c = r; l.d = 1;
    // closed form: R^2 m^2 + R m^2.5 (m = 16 is a perfect square)
    const BigInt y = y_cost(l, m);
    CHECK(y == BigInt(r) * r * m * m + BigInt(r) * m * m * 4);

    int s_steps = 0;
    for (const auto& step : plan.steps) {
        if (step.stage == PlanStage::S) {
            ++s_steps;
            CHECK(step.madds() * 2 <= 4 * y);
            CHECK(step.madds() * 2 >= y / 4);
        }
        if (step.stage == PlanStage::I) {
            // unsketched root merge with v4: abcd * m with c = s
            CHECK(step.madds() == BigInt(r) * s * m);
        }
    }
    CHECK(s_steps == 2);
}

TEST_CASE("single data vertex with one sketch edge: plan is one matrix multiply") {
    SketchSpec spec;
    spec.data.add_vertex("v");
    spec.data.add_edge({"x1", {"v"}, true, 500});
    spec.data.add_edge({"t", {"v"}, true, 7});
    spec.data.bind_random_uniform(8);
    spec.sketch_edges = {"x1"};
    spec.sketch_size = 10;
    const ContractionTree t0 = ContractionTree::leaf(0);
    auto [emb, plan] = build_alg1_embedding(spec, t0);
    CHECK(plan.steps.size() == 1);
    CHECK(plan.total_flops == BigInt(2) * 500 * 10 * 7);

    // tree builder emits the identical plan here
    auto [emb2, plan2] = build_tree_embedding(spec, t0);
    CHECK(plan2.steps.size() == 1);
    CHECK(plan2.total_flops == plan.total_flops);

    const ExecutionResult exec = execute_plan(plan, spec, emb, {3, 0});
    CHECK(exec.total_flops == plan.total_flops);
    CHECK(exec.tensor.shape == std::vector<std::int64_t>{10, 7});
}

TEST_CASE("empty sketch set is rejected") {
    SketchSpec spec;
    spec.data.add_vertex("v");
    spec.data.add_edge({"x1", {"v"}, true, 8});
    spec.sketch_size = 4;
    CHECK_THROWS_WITH_AS(spec.validate(), doctest::Contains("nothing to sketch"),
                         std::invalid_argument);
}

TEST_CASE("tree embedding on Kronecker data costs Theta(sum s_j m + N m^3)") {
    const SketchSpec spec = kron_spec(4, 256, 16, 43);
    const auto t0 = default_tree(spec.data);
    auto [emb, plan] = build_tree_embedding(spec, t0);
    const BigInt reference = BigInt(4) * 256 * 16 + BigInt(4) * 16 * 16 * 16;
    CHECK(plan.total_flops >= reference);
    CHECK(plan.total_flops <= reference * 4);
    CHECK(check_sufficient_condition(emb, 16).ok);
}

TEST_CASE("large contracted dims: tree plan within a constant of alg1") {
    const SketchSpec spec = tt_spec(5, 64, 32, 8, 44);  // R = 32 >= m = 8
    const auto t0 = default_tree(spec.data);
    auto [e1, p1] = build_alg1_embedding(spec, t0);
    auto [e2, p2] = build_tree_embedding(spec, t0);
    const double ratio = to_double(p2.total_flops) / to_double(p1.total_flops);
    CHECK(ratio <= 4.0);
    CHECK(ratio >= 0.25);
}

TEST_CASE("tensor-train embedding: structure, checker, and chain cost") {
    // N = 1 degenerates to a single matrix
    SketchSpec one;
    one.data.add_vertex("v");
    one.data.add_edge({"x1", {"v"}, true, 64});
    one.data.bind_random_uniform(1);
    one.sketch_size = 4;
    one.sketch_edges = {"x1"};
    const Embedding e1 = build_tt_embedding(one);
    CHECK(e1.network.num_vertices() == 1);
    CHECK(e1.network.shape_of(0) == std::vector<std::int64_t>{64, 4});

    // N = 4, m = 10: all internal ranks 10, reverse-BFS witness passes
    const SketchSpec spec = kron_spec(4, 100, 10, 45);
    const Embedding e4 = build_tt_embedding(spec);
    for (const auto& e : e4.network.edges())
        if (e.id.rfind("@r:", 0) == 0) CHECK(e.size == 10);
    const ConditionReport rep = check_sufficient_condition(e4, 10);
    CHECK(rep.ok);
    CHECK(rep.ordering.size() == 4);

    // modeled sketch cost on TT data: leading term Theta(N s R^2 m)
    const std::int64_t s = 50, r = 24, m = 6;
    const SketchSpec tts = tt_spec(6, s, r, m, 46);
    const auto t0 = default_tree(tts.data);
    const Embedding emb = build_tt_embedding(tts);
    const SketchPlan plan = tt_sketch_plan(tts, t0, emb);
    const BigInt lead = BigInt(2) * 6 * s * r * r * m;
    CHECK(plan.total_flops >= lead / 2);
    CHECK(plan.total_flops <= lead * 3);
    CHECK(validate_constrained(plan.resulting_tree, t0, plan.num_data_vertices));
}

TEST_CASE("khatri-rao embedding: Hadamard identity and degenerate N=1") {
    // N = 2: S x = (S1^T x1) * (S2^T x2)
    const SketchSpec spec = kron_spec(2, 20, 8, 47);
    const auto t0 = default_tree(spec.data);
    const Embedding emb = build_khatri_rao_embedding(spec);
    const SketchPlan plan = khatri_rao_sketch_plan(spec, t0, emb);
    const ExecutionResult exec = execute_plan(plan, spec, emb, {5, 0});

    const auto tensors = embedding_tensors(emb, {5, 0});
    const DenseTensor s1x = contract_pair_dense(tensors.at("@KR:1"), spec.data.tensor(0), {"x1"}, {});
    const DenseTensor s2x = contract_pair_dense(tensors.at("@KR:2"), spec.data.tensor(1), {"x2"}, {});
    for (std::int64_t k = 0; k < 8; ++k) {
        const double expect = s1x.values[static_cast<std::size_t>(k)] *
                              s2x.values[static_cast<std::size_t>(k)];
        CHECK(exec.tensor.values[static_cast<std::size_t>(k)] ==
              doctest::Approx(expect).epsilon(1e-12));
    }

    // identical duplicated input agrees with the dense matricized sketch
    const DenseTensor smat = materialize_dense(emb, {5, 0});
    const DenseTensor x = materialize_dense(spec.data);
    const DenseTensor sx = naive_contract_dense(smat, x, spec.sketch_edges, {});
    const DenseTensor aligned = permuted(exec.tensor, sx.mode_labels);
    for (std::size_t i = 0; i < sx.values.size(); ++i)
        CHECK(aligned.values[i] == doctest::Approx(sx.values[i]).epsilon(1e-10));

    // N = 1 is a plain Gaussian sketch
    SketchSpec one;
    one.data.add_vertex("v");
    one.data.add_edge({"x1", {"v"}, true, 32});
    one.data.bind_random_uniform(2);
    one.sketch_size = 4;
    one.sketch_edges = {"x1"};
    const Embedding ke = build_khatri_rao_embedding(one);
    const SketchPlan kp = khatri_rao_sketch_plan(one, ContractionTree::leaf(0), ke);
    const ExecutionResult kx = execute_plan(kp, one, ke, {6, 0});
    CHECK(kx.tensor.shape == std::vector<std::int64_t>{4});
}

TEST_CASE("condition checker verdicts") {
    // tree embedding with all edges m: true
    const SketchSpec spec = kron_spec(4, 64, 8, 48);
    const auto t0 = default_tree(spec.data);
    auto [tree_emb, tree_plan] = build_tree_embedding(spec, t0);
    CHECK(check_sufficient_condition(tree_emb, 8).ok);

    // chain with one internal edge of size 1: false
    SketchSpec tiny = kron_spec(2, 64, 8, 49);
    Embedding chain = build_tt_embedding(tiny);
    chain.network.set_edge_size("@r:1", 1);
    chain.linearization.clear();  // force the search paths
    const ConditionReport bad = check_sufficient_condition(chain, 8);
    CHECK_FALSE(bad.ok);
    CHECK(!bad.failing.empty());

    // strict-accuracy alg1: true; default alpha < m: reported failing vertices
    SketchSpec strict = kron_spec(3, 256, 16, 50);
    strict.strict_accuracy = true;
    auto [se, sp] = build_alg1_embedding(strict, default_tree(strict.data));
    CHECK(check_sufficient_condition(se, 16).ok);

    SketchSpec loose = kron_spec(3, 256, 16, 51);
    auto [le, lp] = build_alg1_embedding(loose, default_tree(loose.data));
    const ConditionReport rep = check_sufficient_condition(le, 16);
    CHECK_FALSE(rep.ok);
    for (const auto& name : rep.failing) CHECK(name.rfind("@Z1:", 0) == 0);

    // a non-graph embedding is rejected
    const Embedding kr = build_khatri_rao_embedding(loose);
    CHECK_THROWS_WITH_AS(check_sufficient_condition(kr, 16),
                         doctest::Contains("not a graph embedding"), std::invalid_argument);
}

TEST_CASE("execute_plan equals the dense oracle across builders and instances") {
    for (int trial = 0; trial < 8; ++trial) {
        testing::InstanceOptions opt;
        opt.min_vertices = 2;
        opt.max_vertices = 5;
        opt.uniform_sketch = trial % 2 == 0;
        opt.m = 4;
        opt.edge_lo = 2;
        opt.edge_hi = 4;
        opt.sketch_lo_factor = 1;
        opt.sketch_hi_factor = 3;
        opt.bind_tensors = true;
        opt.max_dense = 200000;
        auto inst = testing::random_instance(opt, {7100u + static_cast<unsigned>(trial), 3});
        auto spec = testing::make_spec(inst, 4);
        for (const auto kind : {EmbeddingKind::Tn, EmbeddingKind::Tree, EmbeddingKind::Tt,
                                EmbeddingKind::KhatriRao}) {
            const double err = oracle_relative_error(spec, inst.t0, kind,
                                                     {731u + static_cast<unsigned>(trial),
                                                      static_cast<std::uint64_t>(trial)});
            CHECK(err <= 1e-10);
        }
    }
}

TEST_CASE("execute_plan: zero data gives zero output; flop recount is exact") {
    SketchSpec spec = kron_spec(3, 16, 4, 52);
    // zero out the data
    for (int v = 0; v < spec.data.num_vertices(); ++v) {
        DenseTensor z(spec.data.modes_of(v), spec.data.shape_of(v));
        spec.data.bind_tensor(spec.data.vertex_name(v), z);
    }
    const auto t0 = default_tree(spec.data);
    for (const auto kind : {EmbeddingKind::Tn, EmbeddingKind::Tree, EmbeddingKind::Tt,
                            EmbeddingKind::KhatriRao}) {
        auto [emb, plan] = build_embedding(kind, spec, t0);
        const ExecutionResult exec = execute_plan(plan, spec, emb, {9, 1});
        for (double v : exec.tensor.values) CHECK(v == 0.0);
        CHECK(exec.total_flops == plan.total_flops);
        const auto modeled = plan.per_step_flops();
        REQUIRE(exec.step_flops.size() == modeled.size());
        for (std::size_t i = 0; i < modeled.size(); ++i) CHECK(exec.step_flops[i] == modeled[i]);
    }
}

TEST_CASE("materialize_dense: identity, Kronecker product, TT chain oracle") {
    // single Gaussian matrix is returned as-is
    SketchSpec one;
    one.data.add_vertex("v");
    one.data.add_edge({"x1", {"v"}, true, 12});
    one.sketch_size = 3;
    one.sketch_edges = {"x1"};
    const Embedding e1 = build_tt_embedding(one);
    const DenseTensor m1 = materialize_dense(e1, {4, 0});
    const auto t1 = embedding_tensors(e1, {4, 0});
    const DenseTensor direct = permuted(t1.at("@T:1"), {"@tto", "x1"});
    CHECK(m1.values == direct.values);

    // Kronecker product of two matrices
    Embedding kemb;
    kemb.network.add_vertex("K1");
    kemb.network.add_vertex("K2");
    kemb.network.add_edge({"x1", {"K1"}, true, 3});
    kemb.network.add_edge({"o1", {"K1"}, true, 2});
    kemb.network.add_edge({"x2", {"K2"}, true, 4});
    kemb.network.add_edge({"o2", {"K2"}, true, 2});
    kemb.attach_edges = {"x1", "x2"};
    kemb.output_edges = {"o1", "o2"};
    kemb.linearization = {"K1", "K2"};
    kemb.variances = {{"K1", 1.0}, {"K2", 1.0}};
    const DenseTensor kron = materialize_dense(kemb, {8, 0});
    const auto kt = embedding_tensors(kemb, {8, 0});
    const DenseTensor a = permuted(kt.at("K1"), {"o1", "x1"});
    const DenseTensor b = permuted(kt.at("K2"), {"o2", "x2"});
    for (std::int64_t i = 0; i < 2; ++i)
        for (std::int64_t j = 0; j < 2; ++j)
            for (std::int64_t p = 0; p < 3; ++p)
                for (std::int64_t q = 0; q < 4; ++q) {
                    const double expect = a.values[static_cast<std::size_t>(i * 3 + p)] *
                                          b.values[static_cast<std::size_t>(j * 4 + q)];
                    const double got =
                        kron.values[static_cast<std::size_t>(((i * 2 + j) * 3 + p) * 4 + q)];
                    CHECK(got == doctest::Approx(expect).epsilon(1e-13));
                }

    // TT chain N=3, s=4, m=2 against an element-wise contraction oracle
    const SketchSpec spec = kron_spec(3, 4, 2, 53);
    const Embedding tte = build_tt_embedding(spec);
    const DenseTensor mat = materialize_dense(tte, {11, 0});
    const auto cz = embedding_tensors(tte, {11, 0});
    const DenseTensor z1 = permuted(cz.at("@T:1"), {"x1", "@r:1"});
    const DenseTensor z2 = permuted(cz.at("@T:2"), {"@r:1", "x2", "@r:2"});
    const DenseTensor z3 = permuted(cz.at("@T:3"), {"@r:2", "x3", "@tto"});
    for (std::int64_t o = 0; o < 2; ++o)
        for (std::int64_t i1 = 0; i1 < 4; ++i1)
            for (std::int64_t i2 = 0; i2 < 4; ++i2)
                for (std::int64_t i3 = 0; i3 < 4; ++i3) {
                    double acc = 0.0;
                    for (std::int64_t r1 = 0; r1 < 2; ++r1)
                        for (std::int64_t r2 = 0; r2 < 2; ++r2)
                            acc += z1.values[static_cast<std::size_t>(i1 * 2 + r1)] *
                                   z2.values[static_cast<std::size_t>((r1 * 4 + i2) * 2 + r2)] *
                                   z3.values[static_cast<std::size_t>((r2 * 4 + i3) * 2 + o)];
                    const double got = mat.values[static_cast<std::size_t>(
                        ((o * 4 + i1) * 4 + i2) * 4 + i3)];
                    CHECK(got == doctest::Approx(acc).epsilon(1e-12));
                }

    // oracle size guard
    SketchSpec big = kron_spec(4, 1000, 4, 54);
    CHECK_THROWS_WITH_AS(materialize_dense(big.data, 1000), doctest::Contains("oracle too large"),
                         std::invalid_argument);
}

TEST_CASE("unbiasedness: builders keep E|Sx|^2 = |x|^2 (small battery)") {
    const int trials = 300;
    const SketchSpec base = kron_spec(4, 32, 16, 55);
    const auto t0 = default_tree(base.data);
    const double xnorm = tn_norm(base.data);

    auto mean_ratio = [&](EmbeddingKind kind, bool strict) {
        SketchSpec spec = base;
        spec.strict_accuracy = strict;
        double acc = 0.0;
        for (int t = 0; t < trials; ++t) {
            const double err = sketching_error(spec, t0, kind,
                                               {400u + static_cast<unsigned>(t),
                                                static_cast<std::uint64_t>(kind)},
                                               xnorm);
            const double ratio = (err + 1.0);  // | |Sx|/|x| |
            acc += ratio * ratio;
        }
        return acc / trials;
    };
    // |Sx|/|x| - 1 loses the sign; recompute directly instead.
    auto mean_ratio2 = [&](EmbeddingKind kind, bool strict) {
        SketchSpec spec = base;
        spec.strict_accuracy = strict;
        double acc = 0.0;
        for (int t = 0; t < trials; ++t) {
            auto [emb, plan] = build_embedding(kind, spec, t0);
            const ExecutionResult exec = execute_plan(plan, spec, emb,
                                                      {500u + static_cast<unsigned>(t),
                                                       static_cast<std::uint64_t>(kind)});
            const double r = exec.tensor.norm2() / xnorm;
            acc += r * r;
        }
        return acc / trials;
    };
    (void)mean_ratio;
    const double bound = 5.0 / std::sqrt(static_cast<double>(trials));
    CHECK(mean_ratio2(EmbeddingKind::Tree, false) == doctest::Approx(1.0).epsilon(bound));
    CHECK(mean_ratio2(EmbeddingKind::Tt, false) == doctest::Approx(1.0).epsilon(bound));
    CHECK(mean_ratio2(EmbeddingKind::Tn, true) == doctest::Approx(1.0).epsilon(bound));
    CHECK(mean_ratio2(EmbeddingKind::Tn, false) == doctest::Approx(1.0).epsilon(bound));
}

TEST_CASE("plan cost agrees with the formula decomposition within factor 4") {
    for (int trial = 0; trial < 30; ++trial) {
        testing::InstanceOptions opt;
        opt.uniform_sketch = trial % 2 == 0;
        opt.m = 16;
        opt.edge_lo = 2;
        opt.edge_hi = 4;
        auto inst = testing::random_instance(opt, {8100u + static_cast<unsigned>(trial), 0});
        auto spec = testing::make_spec(inst, 16);
        auto [emb, plan] = build_alg1_embedding(spec, inst.t0);
        const CostReport report = plan_cost_report(plan, spec, inst.t0);
        const BigInt formula = 2 * (report.term_kron + report.term_s + report.term_i);
        CHECK(plan.total_flops * 4 >= formula);
        CHECK(plan.total_flops <= formula * 4);
    }
}

TEST_CASE("uniform instances: alg1 modeled cost within [1, 8] of the uniform bound") {
    // The modeled cost is the term decomposition (Kronecker + merge + rest)
    // at 2 flops per multiply-add; the executed plan is tied to this formula
    // by the factor-4 battery above.
    for (int trial = 0; trial < 20; ++trial) {
        testing::InstanceOptions opt;
        opt.uniform_sketch = true;
        opt.m = 64;
        opt.edge_lo = 2;
        opt.edge_hi = 6;
        auto inst = testing::random_instance(opt, {9100u + static_cast<unsigned>(trial), 0});
        auto spec = testing::make_spec(inst, 64);
        auto [emb, plan] = build_alg1_embedding(spec, inst.t0);
        const CostReport report = plan_cost_report(plan, spec, inst.t0);
        const BigInt modeled = 2 * (report.term_kron + report.term_s + report.term_i);
        const BigInt lb = lower_bound_uniform(inst.net, inst.sketch, inst.t0, 64);
        const double ratio = to_double(modeled) / to_double(lb);
        CHECK(ratio >= 1.0);
        CHECK(ratio <= 8.0);
    }
}

TEST_CASE("embedding json dump carries attach, output, and variances") {
    const SketchSpec spec = kron_spec(3, 64, 8, 56);
    auto [emb, plan] = build_alg1_embedding(spec, default_tree(spec.data));
    const nlohmann::json j = emb.to_json();
    CHECK(j.at("attach").size() == 3);
    CHECK(j.at("output").size() == 1);
    CHECK(j.at("variances").size() == emb.network.num_vertices());
}
