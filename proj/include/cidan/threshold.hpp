#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cidan {

// A linearly separable Boolean function: output is 1 iff the weighted sum of
// the binary inputs reaches the threshold. Weights and threshold are small
// signed integers.
struct ThresholdFunction {
  std::vector<int> weights;
  int threshold = 0;

  ThresholdFunction(std::vector<int> w, int t) : weights(std::move(w)), threshold(t) {
    if (weights.empty()) throw std::invalid_argument("ThresholdFunction: empty weight list");
  }
};

// Evaluate f(x) = [sum_i w_i * x_i >= T] with exact integer arithmetic.
inline bool eval_threshold(const ThresholdFunction& tf, const std::vector<bool>& inputs) {
  if (inputs.size() != tf.weights.size())
    throw std::invalid_argument("eval_threshold: input count does not match weight count");
  long long sum = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i)
    if (inputs[i]) sum += tf.weights[i];
  return sum >= tf.threshold;
}

}  // namespace cidan
