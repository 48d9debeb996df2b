#include "jgsa/jgsa.hpp"

#include "jgsa/classify.hpp"
#include "jgsa/geig.hpp"

#include <cmath>
#include <sstream>

namespace jgsa {

void JgsaParams::validate(Eigen::Index side) const {
  if (k < 1) throw ConfigError("k must be >= 1");
  if (t_max < 1) throw ConfigError("t_max must be >= 1");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be >= 0");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be > 0");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ConfigError("mu must be > 0");
  if (!(convergence_tol >= 0.0 && convergence_tol <= 1.0)) {
    throw ConfigError("convergence_tol must lie in [0, 1]");
  }
  kernel.validate();
  if (k > side) {
    throw ConfigError("k = " + std::to_string(k) + " exceeds the projection side length " +
                      std::to_string(side) + (kernel.kernelized() ? " (n_s + n_t)" : " (D)"));
  }
}

Matrix ProjectionPair::stacked() const {
  Matrix w(a.rows() + b.rows(), a.cols());
  w << a, b;
  return w;
}

namespace {

Pencil assemble_with(const ScatterSet& s, const MmdBlocks& mmd, const JgsaParams& p, const Matrix& reg) {
  const Eigen::Index d = s.dim();
  if (s.s_b.rows() != d || s.s_w.rows() != d || mmd.dim() != d || reg.rows() != d || reg.cols() != d) {
    throw DataError("assemble: inconsistent block sizes");
  }
  Pencil out{Matrix::Zero(2 * d, 2 * d), Matrix(2 * d, 2 * d)};
  out.g.topLeftCorner(d, d) = p.beta * s.s_b;
  out.g.bottomRightCorner(d, d) = p.mu * s.s_t;

  out.h.topLeftCorner(d, d) = mmd.m_s + p.lambda * reg + p.beta * s.s_w;
  out.h.topRightCorner(d, d) = mmd.m_st - p.lambda * reg;
  out.h.bottomLeftCorner(d, d) = mmd.m_ts - p.lambda * reg;
  out.h.bottomRightCorner(d, d) = mmd.m_t + (p.lambda + p.mu) * reg;
  out.g = symmetrized(out.g);
  out.h = symmetrized(out.h);
  return out;
}

double changed_fraction(const Labels& a, const Labels& b) {
  std::size_t changed = 0;
  for (std::size_t i = 0; i < a.size(); ++i) changed += a[i] != b[i];
  return a.empty() ? 0.0 : static_cast<double>(changed) / static_cast<double>(a.size());
}

}  // namespace

Pencil assemble(const ScatterSet& scatters, const MmdBlocks& mmd, const JgsaParams& params) {
  return assemble_with(scatters, mmd, params, Matrix::Identity(scatters.dim(), scatters.dim()));
}

Pencil assemble(const ScatterSet& scatters, const MmdBlocks& mmd, const JgsaParams& params,
                const Matrix& gram) {
  return assemble_with(scatters, mmd, params, gram);
}

PseudoLabeler nearest_neighbor_labeler() {
  return [](const Matrix& train_x, const Labels& train_y, const Matrix& query_x) {
    return knn1_classify(train_x, train_y, query_x);
  };
}

JgsaModel fit(const Dataset& xs, const Dataset& xt, const JgsaParams& params, const PseudoLabeler& labeler) {
  const Labels& ys = xs.require_labels();
  if (xs.dim() != xt.dim()) {
    throw DataError("fit: source dim " + std::to_string(xs.dim()) + " != target dim " +
                    std::to_string(xt.dim()));
  }
  const Label classes = xs.num_classes();
  {
    std::vector<bool> seen(static_cast<std::size_t>(classes), false);
    for (Label l : ys) seen[static_cast<std::size_t>(l - 1)] = true;
    for (Label c = 0; c < classes; ++c) {
      if (!seen[static_cast<std::size_t>(c)]) {
        throw DataError("fit: source class " + std::to_string(c + 1) + " has no samples");
      }
    }
  }
  const Eigen::Index ns = xs.size();
  const Eigen::Index nt = xt.size();
  const bool kernelized = params.kernel.kernelized();
  params.validate(kernelized ? ns + nt : xs.dim());

  JgsaModel model;
  model.projector.input_dim = xs.dim();

  // Feature columns the statistics are built on: raw samples, or kernel
  // columns k_i = Phi(X)' phi(x_i) over the pooled X = [X_s, X_t].
  Matrix fs;
  Matrix ft;
  Matrix gram_all;
  ScatterSet scatters;
  if (kernelized) {
    Matrix pooled(xs.dim(), ns + nt);
    pooled << xs.features(), xt.features();
    model.projector.kernel = resolve_bandwidth(params.kernel, pooled);
    gram_all = gram(model.projector.kernel, pooled, pooled);
    fs = gram_all.leftCols(ns);
    ft = gram_all.rightCols(nt);
    model.projector.train_x = std::move(pooled);
    scatters.s_t = kernel_target_scatter(ft, ns + nt);
    auto cs = kernel_class_scatters(fs, ys);
    scatters.s_b = std::move(cs.s_b);
    scatters.s_w = std::move(cs.s_w);
  } else {
    model.projector.kernel = params.kernel;
    fs = xs.features();
    ft = xt.features();
    scatters.s_t = target_scatter(ft);
    auto cs = source_class_scatters(fs, ys);
    scatters.s_b = std::move(cs.s_b);
    scatters.s_w = std::move(cs.s_w);
  }
  const Eigen::Index d = fs.rows();

  Labels pseudo = labeler(xs.features(), ys, xt.features());
  if (static_cast<Eigen::Index>(pseudo.size()) != nt) {
    throw DataError("fit: labeler returned " + std::to_string(pseudo.size()) + " labels for " +
                    std::to_string(nt) + " target samples");
  }
  model.pseudo_history.push_back(pseudo);

  for (int iter = 0; iter < params.t_max; ++iter) {
    const MmdBlocks mmd = mmd_blocks(fs, ys, ft, pseudo);
    const Pencil pencil = kernelized ? assemble(scatters, mmd, params, gram_all) : assemble(scatters, mmd, params);
    const EigResult eig = solve_definite_geig(pencil.g, pencil.h, params.k);

    if (eig.jitter > 0.0) {
      model.diagnostics.max_jitter = std::max(model.diagnostics.max_jitter, eig.jitter);
      std::ostringstream msg;
      msg << "iteration " << iter + 1 << ": denominator needed jitter " << eig.jitter;
      model.diagnostics.warnings.push_back(msg.str());
    }
    const double tiny = 1e-12 * std::max(1.0, std::abs(eig.values(0)));
    const auto positive = (eig.values.array() > tiny).count();
    if (positive < params.k) {
      std::ostringstream msg;
      msg << "iteration " << iter + 1 << ": only " << positive << " of k = " << params.k
          << " generalized eigenvalues are positive";
      model.diagnostics.warnings.push_back(msg.str());
    }

    model.projector.projections.a = eig.vectors.topRows(d);
    model.projector.projections.b = eig.vectors.bottomRows(d);
    model.objective_history.push_back(eig.values.sum());
    model.final_h = pencil.h;
    model.final_h.diagonal().array() += eig.jitter;

    model.z_s = model.projector.projections.a.transpose() * fs;
    model.z_t = model.projector.projections.b.transpose() * ft;

    Labels next = labeler(model.z_s, ys, model.z_t);
    if (static_cast<Eigen::Index>(next.size()) != nt) {
      throw DataError("fit: labeler returned " + std::to_string(next.size()) + " labels for " +
                      std::to_string(nt) + " target samples");
    }
    const double changed = changed_fraction(pseudo, next);
    pseudo = std::move(next);
    model.pseudo_history.push_back(pseudo);
    if (changed <= params.convergence_tol) break;
  }
  return model;
}

Matrix transform(const Projector& projector, const Matrix& x_new, Domain domain) {
  if (x_new.rows() != projector.input_dim) {
    throw DataError("transform: input has " + std::to_string(x_new.rows()) + " rows, model expects " +
                    std::to_string(projector.input_dim));
  }
  const Matrix& p = domain == Domain::source ? projector.projections.a : projector.projections.b;
  if (x_new.cols() == 0) return Matrix(p.cols(), 0);
  if (!projector.kernel.kernelized()) return p.transpose() * x_new;
  return p.transpose() * gram(projector.kernel, projector.train_x, x_new);
}

Matrix transform(const JgsaModel& model, const Matrix& x_new, Domain domain) {
  return transform(model.projector, x_new, domain);
}

}  // namespace jgsa
