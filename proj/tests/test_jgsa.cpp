#include "jgsa/baselines.hpp"
#include "jgsa/classify.hpp"
#include "jgsa/geig.hpp"
#include "jgsa/jgsa.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numeric>

using namespace jgsa;

namespace {

JgsaParams synth_params() {
  JgsaParams p;
  p.k = 2;
  p.t_max = 10;
  p.beta = 0.1;
  return p;
}

ScatterSet oracle_scatters(const Matrix& xs, const Labels& ys, const Matrix& xt) {
  return {oracle::total_scatter(xt), oracle::between_scatter(xs, ys), oracle::within_scatter(xs, ys)};
}

MmdBlocks to_blocks(const oracle::MBlocks& m) { return {m.ms, m.mt, m.mst, m.mts}; }

}  // namespace

TEST(Assemble, ZeroBlocksLayout) {
  std::mt19937_64 rng(1);
  const Eigen::Index d = 3;
  const Matrix xt = oracle::random_matrix(rng, d, 6);
  ScatterSet s{target_scatter(xt), Matrix::Zero(d, d), Matrix::Zero(d, d)};
  const MmdBlocks zero{Matrix::Zero(d, d), Matrix::Zero(d, d), Matrix::Zero(d, d), Matrix::Zero(d, d)};
  JgsaParams p;
  p.beta = 0.0;
  const Pencil pen = assemble(s, zero, p);
  Matrix g = Matrix::Zero(2 * d, 2 * d);
  g.bottomRightCorner(d, d) = s.s_t;
  const Matrix id = Matrix::Identity(d, d);
  Matrix h(2 * d, 2 * d);
  h << id, -id, -id, 2 * id;
  EXPECT_LE(oracle::max_abs(pen.g - g), 1e-15);
  EXPECT_LE(oracle::max_abs(pen.h - h), 1e-15);
  EXPECT_GT(oracle::min_eig(pen.h), 0.0);
}

TEST(Assemble, RegularizerBlockIsDefinite) {
  for (const double lambda : {0.01, 1.0, 100.0}) {
    for (const double mu : {0.01, 1.0, 100.0}) {
      Eigen::Matrix2d r;
      r << lambda, -lambda, -lambda, lambda + mu;
      EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(r).eigenvalues()(0), 0.0);
    }
  }
}

TEST(Assemble, DenominatorTraceExpandsTermByTerm) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 2 + trial % 5;
    const Matrix xs = oracle::random_matrix(rng, d, 9);
    const Matrix xt = oracle::random_matrix(rng, d, 8);
    const Labels ys = oracle::random_labels(rng, 9, 3);
    const Labels pt = oracle::random_labels(rng, 8, 3);
    JgsaParams p;
    p.beta = 0.37;
    p.lambda = 1.7;
    p.mu = 0.6;
    const ScatterSet s = oracle_scatters(xs, ys, xt);
    const oracle::MBlocks m = oracle::mmd_matrices(xs, ys, xt, &pt);
    const Pencil pen = assemble(s, to_blocks(m), p);
    const Matrix a = oracle::random_matrix(rng, d, 2);
    const Matrix b = oracle::random_matrix(rng, d, 2);
    Matrix w(2 * d, 2);
    w << a, b;
    const double mmd = oracle::projected_mean_gap(a, b, xs, ys, xt, &pt);
    const double expected = mmd + p.lambda * (a - b).squaredNorm() + p.beta * (a.transpose() * s.s_w * a).trace() +
                            p.mu * (b.transpose() * b).trace();
    EXPECT_NEAR((w.transpose() * pen.h * w).trace(), expected, 1e-10 * std::max(1.0, std::abs(expected)));
    const double num = p.beta * (a.transpose() * s.s_b * a).trace() + p.mu * (b.transpose() * s.s_t * b).trace();
    EXPECT_NEAR((w.transpose() * pen.g * w).trace(), num, 1e-10 * std::max(1.0, std::abs(num)));
  }
}

TEST(Assemble, KernelRegularizerAndSizeCheck) {
  std::mt19937_64 rng(3);
  const Matrix k = oracle::random_spd(rng, 4);
  const ScatterSet s{Matrix::Zero(4, 4), Matrix::Zero(4, 4), Matrix::Zero(4, 4)};
  const MmdBlocks zero{Matrix::Zero(4, 4), Matrix::Zero(4, 4), Matrix::Zero(4, 4), Matrix::Zero(4, 4)};
  const Pencil pen = assemble(s, zero, JgsaParams{}, k);
  EXPECT_LE(oracle::max_abs(pen.h.topRightCorner(4, 4) + k), 1e-15);
  EXPECT_LE(oracle::max_abs(pen.h.bottomRightCorner(4, 4) - 2.0 * k), 1e-15);
  EXPECT_THROW(assemble(s, zero, JgsaParams{}, Matrix::Identity(3, 3)), DataError);
}

TEST(Eigensolve, LeadingValuesMaximiseRayleighTrace) {
  std::mt19937_64 rng(4);
  const Eigen::Index d = 3;
  const Matrix xs = oracle::random_matrix(rng, d, 9);
  const Matrix xt = oracle::random_matrix(rng, d, 9, 1.5);
  const Labels ys = oracle::random_labels(rng, 9, 3);
  const Labels pt = oracle::random_labels(rng, 9, 3);
  const Pencil pen = assemble(oracle_scatters(xs, ys, xt), to_blocks(oracle::mmd_matrices(xs, ys, xt, &pt)),
                              synth_params());
  const Eigen::Index k = 2;
  const EigResult r = solve_definite_geig(pen.g, pen.h, k);
  const double best = r.values.sum();
  double seen = -1e300;
  for (int i = 0; i < 100000; ++i) {
    Matrix w = oracle::random_matrix(rng, 2 * d, k);
    const Eigen::LLT<Matrix> llt(w.transpose() * pen.h * w);
    const Matrix u = llt.matrixU();
    w = w * u.inverse();  // now W' H W = I
    seen = std::max(seen, (w.transpose() * pen.g * w).trace());
  }
  EXPECT_LE(seen, best + 1e-9);
  EXPECT_NEAR((r.vectors.transpose() * pen.g * r.vectors).trace(), best, 1e-9 * std::max(1.0, best));
}

TEST(Fit, SingleIterationLoopCount) {
  const auto pair = generate_synthetic(default_synthetic_spec(0));
  JgsaParams p = synth_params();
  p.t_max = 1;
  const JgsaModel m = fit(pair.source, pair.target, p);
  EXPECT_EQ(m.iterations(), 1);
  EXPECT_EQ(m.pseudo_history.size(), 2u);
  EXPECT_EQ(m.objective_history.size(), 1u);
}

TEST(Fit, CountsEverySolve) {
  const auto pair = generate_synthetic(default_synthetic_spec(0));
  int calls = 0;
  const PseudoLabeler counting = [&](const Matrix& x, const Labels& y, const Matrix& q) {
    ++calls;
    return knn1_classify(x, y, q);
  };
  const JgsaModel m = fit(pair.source, pair.target, synth_params(), counting);
  EXPECT_EQ(calls, m.iterations() + 1);
  EXPECT_EQ(static_cast<int>(m.pseudo_history.size()), m.iterations() + 1);
  EXPECT_LE(m.iterations(), 10);
}

TEST(Fit, ZeroShiftKeepsTrueLabels) {
  // Separated classes. With overlapping classes A != B (the target-variance
  // term pulls B alone) can relabel boundary points; see the acceptance run.
  auto spec = default_synthetic_spec(5);
  spec.source_scales = {0.2, 0.2, 0.2};
  const auto pair = generate_synthetic(spec);
  const JgsaModel m = fit(pair.source, pair.source.with_name("copy"), synth_params());
  EXPECT_EQ(m.final_pseudo(), *pair.source.labels());
}

TEST(Fit, ZeroShiftWithDominantCouplingOnDefaultSpec) {
  const auto pair = generate_synthetic(default_synthetic_spec(5));
  JgsaParams p = synth_params();
  p.lambda = 1e6;
  const JgsaModel m = fit(pair.source, pair.source.with_name("copy"), p);
  EXPECT_EQ(m.final_pseudo(), *pair.source.labels());
}

TEST(Fit, EmbeddingsAndHOrthonormality) {
  const auto pair = generate_synthetic(default_synthetic_spec(1));
  const JgsaModel m = fit(pair.source, pair.target, synth_params());
  const auto& pr = m.projector.projections;
  EXPECT_LE(oracle::max_abs(m.z_s - pr.a.transpose() * pair.source.features()), 1e-10);
  EXPECT_LE(oracle::max_abs(m.z_t - pr.b.transpose() * pair.target.features()), 1e-10);
  const Matrix w = pr.stacked();
  EXPECT_LE((w.transpose() * m.final_h * w - Matrix::Identity(2, 2)).norm(), 1e-6);
  EXPECT_TRUE(pr.a.allFinite());
  EXPECT_TRUE(pr.b.allFinite());
}

TEST(Fit, TransformSelfConsistencyEmptyAndLinearity) {
  const auto pair = generate_synthetic(default_synthetic_spec(2));
  const JgsaModel m = fit(pair.source, pair.target, synth_params());
  EXPECT_LE(oracle::max_abs(transform(m, pair.target.features(), Domain::target) - m.z_t), 1e-12);
  EXPECT_LE(oracle::max_abs(transform(m, pair.source.features(), Domain::source) - m.z_s), 1e-12);
  const Matrix empty = transform(m, Matrix(3, 0), Domain::target);
  EXPECT_EQ(empty.rows(), 2);
  EXPECT_EQ(empty.cols(), 0);
  const Matrix x = pair.target.features().col(4);
  EXPECT_LE(oracle::max_abs(transform(m, 2.0 * x, Domain::target) - 2.0 * m.z_t.col(4)), 1e-12);
  EXPECT_THROW(transform(m, Matrix::Ones(4, 1), Domain::target), DataError);
}

TEST(Fit, KernelTransformSelfConsistency) {
  auto spec = default_synthetic_spec(3);
  spec.samples_per_class = 20;
  const auto pair = generate_synthetic(spec);
  JgsaParams p = synth_params();
  p.kernel.kind = KernelKind::rbf;
  const JgsaModel m = fit(pair.source, pair.target, p);
  ASSERT_TRUE(m.projector.kernel.bandwidth.has_value());
  EXPECT_EQ(m.projector.side(), 120);
  EXPECT_LE(oracle::max_abs(transform(m, pair.target.features(), Domain::target) - m.z_t), 1e-10);
}

TEST(Fit, LargeLambdaCouplesProjections) {
  const auto pair = generate_synthetic(default_synthetic_spec(0));
  JgsaParams p = synth_params();
  p.lambda = 1e6;
  const JgsaModel m = fit(pair.source, pair.target, p);
  const auto& pr = m.projector.projections;
  EXPECT_LE((pr.a - pr.b).norm() / pr.a.norm(), 0.01);
}

TEST(Fit, ProjectedMmdBelowPca) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto pair = generate_synthetic(default_synthetic_spec(seed));
    const JgsaModel m = fit(pair.source, pair.target, synth_params());
    Matrix pooled(3, 600);
    pooled << pair.source.features(), pair.target.features();
    const Matrix pca = baseline_pca(pooled, 2);
    const double pca_mmd =
        empirical_mmd(pca.transpose() * pair.source.features(), pca.transpose() * pair.target.features());
    EXPECT_LE(empirical_mmd(m.z_s, m.z_t), pca_mmd) << "seed " << seed;
  }
}

TEST(Fit, TargetPermutationEquivariance) {
  const auto pair = generate_synthetic(default_synthetic_spec(4));
  std::vector<Eigen::Index> perm(300);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(4);
  std::shuffle(perm.begin(), perm.end(), rng);
  Labels yt(300);
  for (std::size_t i = 0; i < 300; ++i) yt[i] = (*pair.target.labels())[static_cast<std::size_t>(perm[i])];
  const Dataset permuted(oracle::columns(pair.target.features(), perm), yt);

  const JgsaModel a = fit(pair.source, pair.target, synth_params());
  const JgsaModel b = fit(pair.source, permuted, synth_params());
  EXPECT_LE(oracle::max_abs(oracle::columns(a.z_t, perm) - b.z_t), 1e-8);
  EXPECT_EQ(accuracy(a.final_pseudo(), *pair.target.labels()), accuracy(b.final_pseudo(), yt));
}

TEST(Fit, WarnsWhenFewPositiveEigenvalues) {
  // beta = 0 leaves only mu S_t in the numerator; a flat target makes it rank 2.
  const auto pair = generate_synthetic(default_synthetic_spec(0));
  Matrix flat = pair.target.features();
  flat.row(2).setConstant(1.0);
  JgsaParams p = synth_params();
  p.k = 3;
  p.t_max = 1;
  p.beta = 0.0;
  const JgsaModel m = fit(pair.source, Dataset(flat, std::nullopt), p);
  bool found = false;
  for (const auto& w : m.diagnostics.warnings) found |= w.find("positive") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(Fit, ParameterValidation) {
  const auto pair = generate_synthetic(default_synthetic_spec(0));
  JgsaParams p = synth_params();
  p.k = 4;  // D = 3
  EXPECT_THROW(fit(pair.source, pair.target, p), ConfigError);
  p = synth_params();
  p.lambda = 0.0;
  EXPECT_THROW(fit(pair.source, pair.target, p), ConfigError);
  p = synth_params();
  p.t_max = 0;
  EXPECT_THROW(fit(pair.source, pair.target, p), ConfigError);
  EXPECT_THROW(fit(Dataset(pair.source.features(), std::nullopt), pair.target, synth_params()), DataError);
}

TEST(ModelIo, RoundTrip) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "jgsa_model_io_test";
  fs::create_directories(dir);
  auto spec = default_synthetic_spec(6);
  spec.samples_per_class = 15;
  const auto pair = generate_synthetic(spec);
  for (const KernelKind kind : {KernelKind::primal, KernelKind::rbf}) {
    JgsaParams p = synth_params();
    p.kernel.kind = kind;
    const JgsaModel m = fit(pair.source, pair.target, p);
    const auto digest = training_digest(pair.source.features(), pair.target.features());
    save_model(m.projector, digest, dir / "m.bin");
    const StoredModel back = load_model(dir / "m.bin");
    EXPECT_EQ(back.digest, digest);
    EXPECT_EQ(back.projector.projections.a, m.projector.projections.a);
    EXPECT_EQ(back.projector.projections.b, m.projector.projections.b);
    EXPECT_EQ(back.projector.kernel.kind, kind);
    EXPECT_EQ(back.projector.kernel.bandwidth, m.projector.kernel.bandwidth);
    EXPECT_EQ(transform(back.projector, pair.target.features(), Domain::target), m.z_t);
  }
  std::ofstream(dir / "junk.bin") << "not a model";
  EXPECT_THROW(load_model(dir / "junk.bin"), DataError);
  fs::remove_all(dir);
}

TEST(ModelIo, DigestSensitivity) {
  Matrix a = Matrix::Ones(2, 2);
  const auto d0 = training_digest(a, a);
  a(1, 1) = 1.0000000001;
  EXPECT_NE(training_digest(a, Matrix::Ones(2, 2)), d0);
}
