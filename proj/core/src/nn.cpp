#include "uavroute/nn.hpp"

#include <cmath>
#include <stdexcept>

namespace uavroute {
namespace {

Matrix sigmoid(const Matrix& x) { return (1.0 + (-x.array()).exp()).inverse().matrix(); }

// tanh through the vectorized exp: sign(x) * (1 - e^{-2|x|}) / (1 + e^{-2|x|}).
template <typename Derived>
Matrix tanh_of(const Eigen::MatrixBase<Derived>& x) {
  const Eigen::ArrayXXd e = (-2.0 * x.array().abs()).exp();
  return ((1.0 - e) / (1.0 + e) * x.array().sign()).matrix();
}

void fill_uniform(MatrixMap m, double bound, RandomStream& rng) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.uniform(-bound, bound);
  }
}

}  // namespace

int ParameterSet::add(const std::string& name, int rows, int cols) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("parameter shape must be positive");
  Slot s{name, values_.size(), rows, cols};
  values_.resize(values_.size() + static_cast<std::size_t>(rows) * cols, 0.0);
  grads_.resize(values_.size(), 0.0);
  slots_.push_back(s);
  return static_cast<int>(slots_.size()) - 1;
}

MatrixMap ParameterSet::value(int slot) {
  const Slot& s = slots_.at(static_cast<std::size_t>(slot));
  return MatrixMap(values_.data() + s.offset, s.rows, s.cols);
}

ConstMatrixMap ParameterSet::value(int slot) const {
  const Slot& s = slots_.at(static_cast<std::size_t>(slot));
  return ConstMatrixMap(values_.data() + s.offset, s.rows, s.cols);
}

MatrixMap ParameterSet::grad(int slot) {
  const Slot& s = slots_.at(static_cast<std::size_t>(slot));
  return MatrixMap(grads_.data() + s.offset, s.rows, s.cols);
}

void ParameterSet::zero_grad() { std::fill(grads_.begin(), grads_.end(), 0.0); }

Dense Dense::create(ParameterSet& params, const std::string& name, int in, int out) {
  Dense d;
  d.in = in;
  d.out = out;
  d.weight = params.add(name + ".weight", out, in);
  d.bias = params.add(name + ".bias", out, 1);
  return d;
}

RecurrentEncoder::RecurrentEncoder(const EncoderShape& shape, RandomStream& init_rng,
                                   double head_scale)
    : shape_(shape) {
  const int h = shape.gru_hidden;
  own1_ = Dense::create(params_, "own.0", shape.own_dim, shape.own_hidden);
  own2_ = Dense::create(params_, "own.1", shape.own_hidden, shape.own_hidden);
  neigh1_ = Dense::create(params_, "neigh.0", shape.neigh_dim, shape.neigh_hidden);
  neigh2_ = Dense::create(params_, "neigh.1", shape.neigh_hidden, shape.neigh_hidden);
  gru_wi_ = params_.add("gru.weight_ih", 3 * h, shape.neigh_hidden);
  gru_bi_ = params_.add("gru.bias_ih", 3 * h, 1);
  gru_wh_ = params_.add("gru.weight_hh", 3 * h, h);
  gru_bh_ = params_.add("gru.bias_hh", 3 * h, 1);
  fuse_ = Dense::create(params_, "fuse.0", shape.own_hidden + h, shape.fusion_hidden);
  head_ = Dense::create(params_, "fuse.1", shape.fusion_hidden, shape.out_dim);

  for (const Dense* d : {&own1_, &own2_, &neigh1_, &neigh2_, &fuse_}) {
    fill_uniform(params_.value(d->weight), 1.0 / std::sqrt(static_cast<double>(d->in)), init_rng);
  }
  const double gru_bound = 1.0 / std::sqrt(static_cast<double>(h));
  fill_uniform(params_.value(gru_wi_), gru_bound, init_rng);
  fill_uniform(params_.value(gru_wh_), gru_bound, init_rng);
  fill_uniform(params_.value(head_.weight),
               head_scale / std::sqrt(static_cast<double>(head_.in)), init_rng);
}

void RecurrentEncoder::begin(EncoderCache& cache, int steps, int batch) const {
  if (steps <= 0 || batch <= 0) throw std::invalid_argument("encoder: empty rollout");
  const Eigen::Index n = static_cast<Eigen::Index>(steps) * batch;
  const int h = shape_.gru_hidden;
  cache.steps = steps;
  cache.batch = batch;
  cache.own_in.resize(shape_.own_dim, n);
  cache.neigh_in.resize(shape_.neigh_dim, n);
  cache.own_h1.resize(shape_.own_hidden, n);
  cache.own_out.resize(shape_.own_hidden, n);
  cache.neigh_h1.resize(shape_.neigh_hidden, n);
  cache.neigh_out.resize(shape_.neigh_hidden, n);
  cache.gate_in.resize(3 * h, n);
  cache.gate_hidden.resize(3 * h, n);
  cache.reset.resize(h, n);
  cache.update.resize(h, n);
  cache.candidate.resize(h, n);
  cache.hidden.setZero(h, n + batch);
  cache.fuse_h.resize(shape_.fusion_hidden, n);
  cache.out.resize(shape_.out_dim, n);
}

ColumnBlock RecurrentEncoder::forward_step(EncoderCache& cache, int t, const Matrix& own,
                                           const Matrix& neigh) const {
  if (t < 0 || t >= cache.steps) throw std::out_of_range("encoder: slot outside cache");
  const int b = cache.batch;
  if (own.rows() != shape_.own_dim || own.cols() != b || neigh.rows() != shape_.neigh_dim ||
      neigh.cols() != b) {
    throw std::invalid_argument("encoder: input shape mismatch");
  }
  const Eigen::Index c = static_cast<Eigen::Index>(t) * b;
  const int h = shape_.gru_hidden;
  const auto& p = params_;

  cache.own_in.middleCols(c, b) = own;
  cache.neigh_in.middleCols(c, b) = neigh;

  Matrix x = (p.value(own1_.weight) * own).colwise() + p.value(own1_.bias).col(0);
  cache.own_h1.middleCols(c, b) = tanh_of(x);
  x = (p.value(own2_.weight) * cache.own_h1.middleCols(c, b)).colwise() +
      p.value(own2_.bias).col(0);
  cache.own_out.middleCols(c, b) = tanh_of(x);

  x = (p.value(neigh1_.weight) * neigh).colwise() + p.value(neigh1_.bias).col(0);
  cache.neigh_h1.middleCols(c, b) = tanh_of(x);
  x = (p.value(neigh2_.weight) * cache.neigh_h1.middleCols(c, b)).colwise() +
      p.value(neigh2_.bias).col(0);
  cache.neigh_out.middleCols(c, b) = tanh_of(x);

  const Matrix gi = (p.value(gru_wi_) * cache.neigh_out.middleCols(c, b)).colwise() +
                    p.value(gru_bi_).col(0);
  const Matrix h_prev = cache.hidden.middleCols(c, b);
  const Matrix gh = (p.value(gru_wh_) * h_prev).colwise() + p.value(gru_bh_).col(0);
  const Matrix r = sigmoid(gi.topRows(h) + gh.topRows(h));
  const Matrix z = sigmoid(gi.middleRows(h, h) + gh.middleRows(h, h));
  const Matrix n =
      tanh_of(gi.bottomRows(h) + (r.array() * gh.bottomRows(h).array()).matrix());
  cache.gate_in.middleCols(c, b) = gi;
  cache.gate_hidden.middleCols(c, b) = gh;
  cache.reset.middleCols(c, b) = r;
  cache.update.middleCols(c, b) = z;
  cache.candidate.middleCols(c, b) = n;
  cache.hidden.middleCols(c + b, b) =
      ((1.0 - z.array()) * n.array() + z.array() * h_prev.array()).matrix();

  const auto wf = p.value(fuse_.weight);
  x = (wf.leftCols(shape_.own_hidden) * cache.own_out.middleCols(c, b) +
       wf.rightCols(h) * cache.hidden.middleCols(c + b, b))
          .colwise() +
      p.value(fuse_.bias).col(0);
  cache.fuse_h.middleCols(c, b) = tanh_of(x);
  cache.out.middleCols(c, b) =
      (p.value(head_.weight) * cache.fuse_h.middleCols(c, b)).colwise() +
      p.value(head_.bias).col(0);
  return cache.out.middleCols(c, b);
}

void RecurrentEncoder::forward_sequence(EncoderCache& cache, int steps, int batch,
                                        const Matrix& own, const Matrix& neigh) const {
  begin(cache, steps, batch);
  const Eigen::Index total = static_cast<Eigen::Index>(steps) * batch;
  if (own.rows() != shape_.own_dim || own.cols() != total || neigh.rows() != shape_.neigh_dim ||
      neigh.cols() != total) {
    throw std::invalid_argument("encoder: input shape mismatch");
  }
  const int b = batch;
  const int h = shape_.gru_hidden;
  const auto& p = params_;
  auto dense = [&](const Dense& layer, const auto& x, Matrix& y) {
    y.noalias() = p.value(layer.weight) * x;
    y.colwise() += p.value(layer.bias).col(0);
  };

  cache.own_in = own;
  cache.neigh_in = neigh;
  dense(own1_, own, cache.own_h1);
  cache.own_h1 = tanh_of(cache.own_h1);
  dense(own2_, cache.own_h1, cache.own_out);
  cache.own_out = tanh_of(cache.own_out);
  dense(neigh1_, neigh, cache.neigh_h1);
  cache.neigh_h1 = tanh_of(cache.neigh_h1);
  dense(neigh2_, cache.neigh_h1, cache.neigh_out);
  cache.neigh_out = tanh_of(cache.neigh_out);
  cache.gate_in.noalias() = p.value(gru_wi_) * cache.neigh_out;
  cache.gate_in.colwise() += p.value(gru_bi_).col(0);

  const auto wh = p.value(gru_wh_);
  const auto bh = p.value(gru_bh_).col(0);
  for (int t = 0; t < steps; ++t) {
    const Eigen::Index c = static_cast<Eigen::Index>(t) * b;
    auto gh = cache.gate_hidden.middleCols(c, b);
    gh.noalias() = wh * cache.hidden.middleCols(c, b);
    gh.colwise() += bh;
    const auto gi = cache.gate_in.middleCols(c, b);
    cache.reset.middleCols(c, b) = sigmoid(gi.topRows(h) + gh.topRows(h));
    cache.update.middleCols(c, b) = sigmoid(gi.middleRows(h, h) + gh.middleRows(h, h));
    const auto r = cache.reset.middleCols(c, b).array();
    const auto z = cache.update.middleCols(c, b).array();
    cache.candidate.middleCols(c, b) =
        tanh_of(gi.bottomRows(h) + (r * gh.bottomRows(h).array()).matrix());
    const auto n = cache.candidate.middleCols(c, b).array();
    cache.hidden.middleCols(c + b, b) =
        ((1.0 - z) * n + z * cache.hidden.middleCols(c, b).array()).matrix();
  }

  const auto wf = p.value(fuse_.weight);
  cache.fuse_h.noalias() = wf.leftCols(shape_.own_hidden) * cache.own_out;
  cache.fuse_h.noalias() += wf.rightCols(h) * cache.hidden.rightCols(total);
  cache.fuse_h.colwise() += p.value(fuse_.bias).col(0);
  cache.fuse_h = tanh_of(cache.fuse_h);
  dense(head_, cache.fuse_h, cache.out);
}

void RecurrentEncoder::backward(const EncoderCache& cache, int steps, const Matrix& d_out) {
  if (steps <= 0 || steps > cache.steps) throw std::invalid_argument("encoder: bad step count");
  const int b = cache.batch;
  const Eigen::Index n = static_cast<Eigen::Index>(steps) * b;
  if (d_out.rows() != shape_.out_dim || d_out.cols() != n) {
    throw std::invalid_argument("encoder: gradient shape mismatch");
  }
  const int h = shape_.gru_hidden;
  auto& p = params_;

  const auto fuse_h = cache.fuse_h.leftCols(n);
  p.grad(head_.weight).noalias() += d_out * fuse_h.transpose();
  p.grad(head_.bias) += d_out.rowwise().sum();
  Matrix d_fuse = p.value(head_.weight).transpose() * d_out;
  d_fuse.array() *= 1.0 - fuse_h.array().square();

  const auto own_out = cache.own_out.leftCols(n);
  const auto h_next = cache.hidden.middleCols(b, n);
  auto gf = p.grad(fuse_.weight);
  gf.leftCols(shape_.own_hidden).noalias() += d_fuse * own_out.transpose();
  gf.rightCols(h).noalias() += d_fuse * h_next.transpose();
  p.grad(fuse_.bias) += d_fuse.rowwise().sum();
  const auto wf = p.value(fuse_.weight);
  Matrix d_own = wf.leftCols(shape_.own_hidden).transpose() * d_fuse;
  const Matrix d_hidden_out = wf.rightCols(h).transpose() * d_fuse;

  Matrix d_gi(3 * h, n);
  Matrix d_gh(3 * h, n);
  Matrix carry = Matrix::Zero(h, b);
  const auto wh = p.value(gru_wh_);
  for (int t = steps - 1; t >= 0; --t) {
    const Eigen::Index c = static_cast<Eigen::Index>(t) * b;
    const Matrix dh = d_hidden_out.middleCols(c, b) + carry;
    const auto r = cache.reset.middleCols(c, b).array();
    const auto z = cache.update.middleCols(c, b).array();
    const auto cand = cache.candidate.middleCols(c, b).array();
    const auto h_prev = cache.hidden.middleCols(c, b).array();
    const auto gh_n = cache.gate_hidden.middleCols(c, b).bottomRows(h).array();

    const Eigen::ArrayXXd d_n = dh.array() * (1.0 - z) * (1.0 - cand.square());
    const Eigen::ArrayXXd d_z = dh.array() * (h_prev - cand) * z * (1.0 - z);
    const Eigen::ArrayXXd d_r = d_n * gh_n * r * (1.0 - r);

    d_gi.middleCols(c, b).topRows(h) = d_r.matrix();
    d_gi.middleCols(c, b).middleRows(h, h) = d_z.matrix();
    d_gi.middleCols(c, b).bottomRows(h) = d_n.matrix();
    d_gh.middleCols(c, b).topRows(h) = d_r.matrix();
    d_gh.middleCols(c, b).middleRows(h, h) = d_z.matrix();
    d_gh.middleCols(c, b).bottomRows(h) = (d_n * r).matrix();

    carry = (dh.array() * z).matrix();
    carry.noalias() += wh.transpose() * d_gh.middleCols(c, b);
  }

  const auto neigh_out = cache.neigh_out.leftCols(n);
  p.grad(gru_wi_).noalias() += d_gi * neigh_out.transpose();
  p.grad(gru_bi_) += d_gi.rowwise().sum();
  p.grad(gru_wh_).noalias() += d_gh * cache.hidden.leftCols(n).transpose();
  p.grad(gru_bh_) += d_gh.rowwise().sum();
  Matrix d_neigh = p.value(gru_wi_).transpose() * d_gi;

  auto dense_back = [&](const Dense& layer, Matrix& d_y, const auto& y, const auto& x,
                        bool need_input) {
    d_y.array() *= 1.0 - y.array().square();
    p.grad(layer.weight).noalias() += d_y * x.transpose();
    p.grad(layer.bias) += d_y.rowwise().sum();
    if (need_input) d_y = p.value(layer.weight).transpose() * d_y;
  };
  dense_back(neigh2_, d_neigh, neigh_out, cache.neigh_h1.leftCols(n), true);
  dense_back(neigh1_, d_neigh, cache.neigh_h1.leftCols(n), cache.neigh_in.leftCols(n), false);
  dense_back(own2_, d_own, own_out, cache.own_h1.leftCols(n), true);
  dense_back(own1_, d_own, cache.own_h1.leftCols(n), cache.own_in.leftCols(n), false);
}

}  // namespace uavroute
