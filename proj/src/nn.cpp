#include "windbess/nn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace windbess {

Mlp::Mlp(std::vector<int> sizes, OutputActivation out_act, std::uint64_t seed)
    : sizes_(std::move(sizes)), out_act_(out_act) {
  if (sizes_.size() < 2)
    throw std::invalid_argument("Mlp needs at least input and output sizes");
  for (int s : sizes_)
    if (s <= 0) throw std::invalid_argument("Mlp layer sizes must be > 0");

  std::mt19937_64 rng(seed);
  w_.resize(layer_count());
  b_.resize(layer_count());
  for (int l = 0; l < layer_count(); ++l) {
    const int fan_in = sizes_[l];
    const int fan_out = sizes_[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    w_[l].resize(static_cast<std::size_t>(fan_in) * fan_out);
    for (double& x : w_[l]) x = dist(rng);
    b_[l].assign(fan_out, 0.0);
  }
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
  Workspace ws;
  return forward(input, ws);
}

const std::vector<double>& Mlp::forward(std::span<const double> input,
                                        Workspace& ws) const {
  if (static_cast<int>(input.size()) != input_size())
    throw std::invalid_argument("Mlp::forward: input size mismatch");
  const int L = layer_count();
  ws.pre.resize(L);
  ws.post.resize(L);

  const double* src = input.data();
  for (int l = 0; l < L; ++l) {
    const int in_n = sizes_[l];
    const int out_n = sizes_[l + 1];
    ws.pre[l].assign(b_[l].begin(), b_[l].end());
    double* z = ws.pre[l].data();
    const double* w = w_[l].data();
    for (int o = 0; o < out_n; ++o) {
      const double* row = w + static_cast<std::size_t>(o) * in_n;
      double acc = z[o];
      for (int i = 0; i < in_n; ++i) acc += row[i] * src[i];
      z[o] = acc;
    }
    ws.post[l].resize(out_n);
    double* a = ws.post[l].data();
    if (l + 1 < L) {
      for (int o = 0; o < out_n; ++o) a[o] = z[o] > 0 ? z[o] : 0.0;
    } else if (out_act_ == OutputActivation::Tanh) {
      for (int o = 0; o < out_n; ++o) a[o] = std::tanh(z[o]);
    } else {
      for (int o = 0; o < out_n; ++o) a[o] = z[o];
    }
    src = a;
  }
  return ws.post.back();
}

Mlp::Gradients Mlp::Gradients::zeros_like(const Mlp& net) {
  Gradients g;
  g.w.resize(net.layer_count());
  g.b.resize(net.layer_count());
  for (int l = 0; l < net.layer_count(); ++l) {
    g.w[l].assign(net.weights(l).size(), 0.0);
    g.b[l].assign(net.biases(l).size(), 0.0);
  }
  g.input.assign(net.input_size(), 0.0);
  return g;
}

void Mlp::Gradients::reset() {
  for (auto& v : w) std::fill(v.begin(), v.end(), 0.0);
  for (auto& v : b) std::fill(v.begin(), v.end(), 0.0);
  std::fill(input.begin(), input.end(), 0.0);
}

void Mlp::backward(std::span<const double> input, const Workspace& ws,
                   std::span<const double> output_grad, Gradients& out) const {
  const int L = layer_count();
  if (static_cast<int>(output_grad.size()) != output_size())
    throw std::invalid_argument("Mlp::backward: output_grad size mismatch");

  // delta = dLoss/d(pre-activation) of the current layer.
  std::vector<double> delta(output_grad.begin(), output_grad.end());
  if (out_act_ == OutputActivation::Tanh) {
    const std::vector<double>& y = ws.post[L - 1];
    for (int o = 0; o < output_size(); ++o) delta[o] *= 1.0 - y[o] * y[o];
  }

  std::vector<double> prev_delta;
  for (int l = L - 1; l >= 0; --l) {
    const int in_n = sizes_[l];
    const int out_n = sizes_[l + 1];
    const double* below = l == 0 ? input.data() : ws.post[l - 1].data();
    double* gw = out.w[l].data();
    double* gb = out.b[l].data();
    for (int o = 0; o < out_n; ++o) {
      const double d = delta[o];
      gb[o] += d;
      double* grow = gw + static_cast<std::size_t>(o) * in_n;
      for (int i = 0; i < in_n; ++i) grow[i] += d * below[i];
    }
    prev_delta.assign(in_n, 0.0);
    const double* w = w_[l].data();
    for (int o = 0; o < out_n; ++o) {
      const double d = delta[o];
      const double* row = w + static_cast<std::size_t>(o) * in_n;
      for (int i = 0; i < in_n; ++i) prev_delta[i] += d * row[i];
    }
    if (l > 0) {
      const std::vector<double>& z = ws.pre[l - 1];
      for (int i = 0; i < in_n; ++i)
        if (z[i] <= 0) prev_delta[i] = 0.0;
    }
    delta.swap(prev_delta);
  }
  out.input.assign(delta.begin(), delta.end());
}

void write_hex(std::ostream& os, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%a", v);
  os << buf;
}

double read_hex(std::istream& is) {
  std::string tok;
  if (!(is >> tok)) throw std::runtime_error("hexfloat read: truncated stream");
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size())
    throw std::runtime_error("hexfloat read: bad number '" + tok + "'");
  return v;
}

void Mlp::save(std::ostream& os) const {
  os << "mlp " << sizes_.size();
  for (int s : sizes_) os << ' ' << s;
  os << ' ' << (out_act_ == OutputActivation::Tanh ? "tanh" : "identity")
     << '\n';
  for (int l = 0; l < layer_count(); ++l) {
    os << "W" << l;
    for (double v : w_[l]) {
      os << ' ';
      write_hex(os, v);
    }
    os << "\nb" << l;
    for (double v : b_[l]) {
      os << ' ';
      write_hex(os, v);
    }
    os << '\n';
  }
}

Mlp Mlp::load(std::istream& is) {
  std::string tag;
  std::size_t n = 0;
  if (!(is >> tag >> n) || tag != "mlp")
    throw std::runtime_error("Mlp::load: missing 'mlp' header");
  if (n < 2 || n > 64) throw std::runtime_error("Mlp::load: bad layer count");
  std::vector<int> sizes(n);
  for (auto& s : sizes)
    if (!(is >> s) || s <= 0)
      throw std::runtime_error("Mlp::load: bad layer size");
  std::string act;
  if (!(is >> act) || (act != "tanh" && act != "identity"))
    throw std::runtime_error("Mlp::load: bad activation '" + act + "'");

  Mlp net;
  net.sizes_ = std::move(sizes);
  net.out_act_ =
      act == "tanh" ? OutputActivation::Tanh : OutputActivation::Identity;
  net.w_.resize(net.layer_count());
  net.b_.resize(net.layer_count());
  for (int l = 0; l < net.layer_count(); ++l) {
    std::string label;
    if (!(is >> label) || label != "W" + std::to_string(l))
      throw std::runtime_error("Mlp::load: expected W" + std::to_string(l));
    net.w_[l].resize(static_cast<std::size_t>(net.sizes_[l]) *
                     net.sizes_[l + 1]);
    for (double& v : net.w_[l]) v = read_hex(is);
    if (!(is >> label) || label != "b" + std::to_string(l))
      throw std::runtime_error("Mlp::load: expected b" + std::to_string(l));
    net.b_[l].resize(net.sizes_[l + 1]);
    for (double& v : net.b_[l]) v = read_hex(is);
  }
  return net;
}

bool Mlp::operator==(const Mlp& other) const {
  return sizes_ == other.sizes_ && out_act_ == other.out_act_ &&
         w_ == other.w_ && b_ == other.b_;
}

AdamOptimizer::AdamOptimizer(const Mlp& net, double lr, double beta1,
                             double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  mw_.resize(net.layer_count());
  vw_.resize(net.layer_count());
  mb_.resize(net.layer_count());
  vb_.resize(net.layer_count());
  for (int l = 0; l < net.layer_count(); ++l) {
    mw_[l].assign(net.weights(l).size(), 0.0);
    vw_[l].assign(net.weights(l).size(), 0.0);
    mb_[l].assign(net.biases(l).size(), 0.0);
    vb_[l].assign(net.biases(l).size(), 0.0);
  }
}

void AdamOptimizer::step(Mlp& net, const Mlp::Gradients& grads) {
  ++steps_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(steps_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(steps_));
  auto apply = [&](std::vector<double>& param, const std::vector<double>& g,
                   std::vector<double>& m, std::vector<double>& v) {
    for (std::size_t i = 0; i < param.size(); ++i) {
      if (!std::isfinite(g[i]))
        throw std::runtime_error("AdamOptimizer: non-finite gradient");
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * g[i];
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * g[i] * g[i];
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      param[i] -= lr_ * m_hat / (std::sqrt(v_hat) + eps_);
    }
  };
  for (int l = 0; l < net.layer_count(); ++l) {
    apply(net.weights(l), grads.w[l], mw_[l], vw_[l]);
    apply(net.biases(l), grads.b[l], mb_[l], vb_[l]);
  }
}

void soft_update(const Mlp& source, Mlp& target, double polyak) {
  for (int l = 0; l < source.layer_count(); ++l) {
    const std::vector<double>& sw = source.weights(l);
    std::vector<double>& tw = target.weights(l);
    for (std::size_t i = 0; i < sw.size(); ++i)
      tw[i] = polyak * sw[i] + (1.0 - polyak) * tw[i];
    const std::vector<double>& sb = source.biases(l);
    std::vector<double>& tb = target.biases(l);
    for (std::size_t i = 0; i < sb.size(); ++i)
      tb[i] = polyak * sb[i] + (1.0 - polyak) * tb[i];
  }
}

}  // namespace windbess
