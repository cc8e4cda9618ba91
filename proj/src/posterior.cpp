#include "acts/posterior.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "acts/error.hpp"
#include "acts/normal.hpp"

namespace acts {

namespace {

bool all_finite(const Vector& x) { return x.allFinite(); }

void append_double(std::string& out, double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  out.append(buf, end);
}

}  // namespace

PosteriorState::PosteriorState(std::size_t dim, double v)
    : B_(Matrix::Identity(static_cast<Eigen::Index>(dim),
                          static_cast<Eigen::Index>(dim))),
      b_hat_(Vector::Zero(static_cast<Eigen::Index>(dim))),
      theta_hat_(Vector::Zero(static_cast<Eigen::Index>(dim))),
      v_(v) {
  require(dim >= 1, "posterior dimension must be positive");
  require(std::isfinite(v) && v > 0.0, "posterior scale v must be positive");
  llt_.compute(B_);
}

void PosteriorState::check_features(const Vector& s) const {
  require(static_cast<std::size_t>(s.size()) == dim(),
          "feature dimension " + std::to_string(s.size()) +
              " does not match posterior dimension " + std::to_string(dim()));
}

void PosteriorState::update(const Vector& s, double pi, bool action_nonzero,
                            double reward) {
  check_features(s);
  require(pi > 0.0 && pi < 1.0, "pi must lie strictly inside (0, 1)");
  require(std::isfinite(reward), "reward must be finite");
  require(all_finite(s), "feature values must be finite");
  const double indicator = action_nonzero ? 1.0 : 0.0;
  apply(s, pi * (1.0 - pi), (indicator - pi) * reward);
}

void PosteriorState::update_unweighted(const Vector& x, double reward) {
  check_features(x);
  require(std::isfinite(reward), "reward must be finite");
  require(all_finite(x), "feature values must be finite");
  apply(x, 1.0, reward);
}

void PosteriorState::apply(const Vector& s, double weight, double target) {
  const Eigen::Index d = s.size();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double inc = weight * (s[i] * s[j]);
      B_(i, j) += inc;
      if (j != i) B_(j, i) += inc;
    }
  }
  b_hat_ += target * s;
  llt_.compute(B_);
  theta_hat_ = llt_.solve(b_hat_);
  ++update_count_;
}

Vector PosteriorState::sample_theta(RandomStream& rng) const {
  Vector z(b_hat_.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  // B = L L^T, so L^{-T} z has covariance B^{-1}.
  Vector offset = llt_.matrixU().solve(z);
  return theta_hat_ + v_ * offset;
}

double PosteriorState::z_width(const Vector& s) const {
  check_features(s);
  Vector w = llt_.matrixL().solve(s);
  return w.norm();
}

double PosteriorState::prob_positive(const Vector& s) const {
  const double z = z_width(s);
  if (z == 0.0) return 0.5;
  return normal_cdf(s.dot(theta_hat_) / (v_ * z));
}

std::string PosteriorState::snapshot() const {
  std::string out = std::to_string(dim()) + "\n";
  const auto d = static_cast<Eigen::Index>(dim());
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (j) out += ' ';
      append_double(out, B_(i, j));
    }
    out += '\n';
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    if (i) out += ' ';
    append_double(out, b_hat_[i]);
  }
  out += '\n';
  append_double(out, v_);
  out += '\n';
  return out;
}

PosteriorState PosteriorState::from_snapshot(std::string_view text) {
  std::istringstream in{std::string(text)};
  long long d = 0;
  if (!(in >> d) || d < 1) fail(ErrorCode::kParse, "snapshot: bad dimension");
  Matrix B(d, d);
  Vector b(d);
  double v = 0.0;
  for (long long i = 0; i < d * d; ++i) {
    if (!(in >> B(i / d, i % d))) fail(ErrorCode::kParse, "snapshot: truncated B");
  }
  for (long long i = 0; i < d; ++i) {
    if (!(in >> b[i])) fail(ErrorCode::kParse, "snapshot: truncated b_hat");
  }
  if (!(in >> v)) fail(ErrorCode::kParse, "snapshot: missing v");
  std::string rest;
  if (in >> rest) fail(ErrorCode::kParse, "snapshot: trailing data");
  if (!B.allFinite() || !b.allFinite())
    fail(ErrorCode::kParse, "snapshot: non-finite values");
  if (B != B.transpose())
    fail(ErrorCode::kParse, "snapshot: B is not symmetric");

  PosteriorState state(static_cast<std::size_t>(d), v);
  state.B_ = B;
  state.b_hat_ = b;
  state.llt_.compute(B);
  if (state.llt_.info() != Eigen::Success)
    fail(ErrorCode::kParse, "snapshot: B is not positive definite");
  state.theta_hat_ = state.llt_.solve(b);
  return state;
}

}  // namespace acts
