#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "uavroute/rng.hpp"

namespace uavroute {

using Matrix = Eigen::MatrixXd;
using MatrixMap = Eigen::Map<Eigen::MatrixXd>;
using ConstMatrixMap = Eigen::Map<const Eigen::MatrixXd>;
using ColumnBlock = Eigen::Block<Matrix, Eigen::Dynamic, Eigen::Dynamic, true>;
/// Aligned so that vectorized kernels see the same layout wherever the buffer lands.
using ParamVector = std::vector<double, Eigen::aligned_allocator<double>>;

/// Flat storage for every weight of a network plus a matching gradient buffer.
class ParameterSet {
 public:
  struct Slot {
    std::string name;
    std::size_t offset = 0;
    int rows = 0;
    int cols = 0;
  };

  /// Registers a rows x cols tensor and returns its slot index. Only valid before the
  /// first call to value()/grad() since the buffers may reallocate.
  int add(const std::string& name, int rows, int cols);

  MatrixMap value(int slot);
  ConstMatrixMap value(int slot) const;
  MatrixMap grad(int slot);

  ParamVector& values() { return values_; }
  const ParamVector& values() const { return values_; }
  ParamVector& grads() { return grads_; }
  const ParamVector& grads() const { return grads_; }
  const std::vector<Slot>& slots() const { return slots_; }
  std::size_t size() const { return values_.size(); }

  void zero_grad();

 private:
  std::vector<Slot> slots_;
  ParamVector values_;
  ParamVector grads_;
};

/// Affine layer y = W x + b applied column-wise.
struct Dense {
  int in = 0;
  int out = 0;
  int weight = -1;
  int bias = -1;

  static Dense create(ParameterSet& params, const std::string& name, int in, int out);
};

struct EncoderShape {
  int own_dim = 3;
  int neigh_dim = 12;
  int own_hidden = 128;
  int neigh_hidden = 256;
  int gru_hidden = 256;
  int fusion_hidden = 128;
  int out_dim = 5;
};

/// Activations of one rollout of `steps` slots with `batch` agents per slot. Column
/// t * batch + m belongs to agent m at slot t.
struct EncoderCache {
  int steps = 0;
  int batch = 0;
  Matrix own_in, neigh_in;
  Matrix own_h1, own_out;
  Matrix neigh_h1, neigh_out;
  /// W_i x + b_i and W_h h + b_h, stacked [r; z; n].
  Matrix gate_in, gate_hidden;
  Matrix reset, update, candidate;
  /// Hidden states; block 0 is the zero initial state, block t + 1 follows slot t.
  Matrix hidden;
  Matrix fuse_h;
  Matrix out;
};

/// Actor/critic trunk: own-state MLP, neighbor MLP followed by a GRU cell that carries
/// state across slots, and a fusion MLP over both encodings.
class RecurrentEncoder {
 public:
  RecurrentEncoder() = default;
  RecurrentEncoder(const EncoderShape& shape, RandomStream& init_rng, double head_scale = 0.01);

  const EncoderShape& shape() const { return shape_; }
  ParameterSet& params() { return params_; }
  const ParameterSet& params() const { return params_; }

  /// Sizes the cache and zeroes the initial hidden state.
  void begin(EncoderCache& cache, int steps, int batch) const;

  /// Runs slot `t` for all agents; inputs are own_dim x batch and neigh_dim x batch.
  /// Returns the out_dim x batch block of cache.out.
  ColumnBlock forward_step(EncoderCache& cache, int t, const Matrix& own,
                           const Matrix& neigh) const;

  /// Runs every slot at once; columns are ordered t * batch + agent. Only the recurrence
  /// is stepped, so results match forward_step up to floating-point reassociation.
  void forward_sequence(EncoderCache& cache, int steps, int batch, const Matrix& own,
                        const Matrix& neigh) const;

  /// Accumulates parameter gradients for dL/d(out) over the first `steps` slots of the
  /// cache, back-propagating through the recurrence.
  void backward(const EncoderCache& cache, int steps, const Matrix& d_out);

 private:
  EncoderShape shape_;
  ParameterSet params_;
  Dense own1_, own2_, neigh1_, neigh2_;
  int gru_wi_ = -1, gru_bi_ = -1, gru_wh_ = -1, gru_bh_ = -1;
  Dense fuse_, head_;
};

}  // namespace uavroute
