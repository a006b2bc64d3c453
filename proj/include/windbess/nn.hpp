#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace windbess {

enum class OutputActivation { Identity, Tanh };

// Dense feed-forward network with rectifier hidden units. Weights are stored
// row-major, weights(l) has shape sizes[l+1] x sizes[l]. Initialization is
// uniform in +-1/sqrt(fan_in), biases start at zero; fully determined by the
// seed.
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::vector<int> sizes, OutputActivation out_act, std::uint64_t seed);

  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  int layer_count() const { return static_cast<int>(sizes_.size()) - 1; }
  const std::vector<int>& sizes() const { return sizes_; }
  OutputActivation output_activation() const { return out_act_; }

  std::vector<double>& weights(int layer) { return w_[layer]; }
  std::vector<double>& biases(int layer) { return b_[layer]; }
  const std::vector<double>& weights(int layer) const { return w_[layer]; }
  const std::vector<double>& biases(int layer) const { return b_[layer]; }

  // Forward-pass scratch that backward() reads.
  struct Workspace {
    std::vector<std::vector<double>> pre;   // pre-activations per layer
    std::vector<std::vector<double>> post;  // activated outputs per layer
  };

  std::vector<double> forward(std::span<const double> input) const;
  const std::vector<double>& forward(std::span<const double> input,
                                     Workspace& ws) const;

  struct Gradients {
    std::vector<std::vector<double>> w, b;
    std::vector<double> input;  // dLoss/dInput of the last backward() call

    static Gradients zeros_like(const Mlp& net);
    void reset();
  };

  // Reverse-mode accumulation of dLoss/dParams into `out` given
  // dLoss/dOutput; `ws` must hold the forward pass for `input`.
  // `out.input` is overwritten, parameter gradients are accumulated.
  void backward(std::span<const double> input, const Workspace& ws,
                std::span<const double> output_grad, Gradients& out) const;

  // Textual serialization using C hexfloats; round-trips bit-exactly.
  void save(std::ostream& os) const;
  static Mlp load(std::istream& is);

  bool operator==(const Mlp& other) const;

 private:
  std::vector<int> sizes_;
  OutputActivation out_act_ = OutputActivation::Identity;
  std::vector<std::vector<double>> w_, b_;
};

// Adam with bias correction. Rejects non-finite gradients.
class AdamOptimizer {
 public:
  AdamOptimizer() = default;
  AdamOptimizer(const Mlp& net, double lr, double beta1 = 0.9,
                double beta2 = 0.999, double eps = 1e-8);

  void step(Mlp& net, const Mlp::Gradients& grads);
  long step_count() const { return steps_; }

 private:
  double lr_ = 3e-4, beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
  long steps_ = 0;
  std::vector<std::vector<double>> mw_, vw_, mb_, vb_;
};

// target = polyak * source + (1 - polyak) * target, elementwise.
void soft_update(const Mlp& source, Mlp& target, double polyak);

// C hexfloat text helpers shared by every serialization path; values
// round-trip bit-exactly. read_hex throws std::runtime_error on bad input.
void write_hex(std::ostream& os, double v);
double read_hex(std::istream& is);

}  // namespace windbess
