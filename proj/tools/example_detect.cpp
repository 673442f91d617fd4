// Minimal library walk-through: simulate a rate change, build a threshold,
// run the test and compare the estimate with the theory.

#include <cstdio>

#include "fdcp/fdcp.hpp"

int main() {
  using namespace fdcp;
  const ChangePointModel model{RenewalSpec::gamma(1, 5), RenewalSpec::gamma(0.25, 5), 500.0, 1000.0, 1};
  const std::vector<double> windows{100.0, 150.0};

  const ThresholdTable table = simulate_threshold(model.T, windows, 5.0, 0.05, 2000, 1);
  const EventSequence events = simulate_compound(model, 42);
  const DetectionResult result = detect(events, model.T, model.n, windows, table);

  std::printf("%zu events, Q = %.3f, max |G| = %.3f, reject = %d\n", events.size(), result.Q, result.global_max,
              result.reject);
  for (const auto& cp : result.change_points) std::printf("  change point near %.1f (h = %.0f)\n", cp.location, cp.h);

  const TheoryParams p = TheoryParams::from_model(model, 150.0);
  std::printf("theory: shape %s, |Lambda_c| = %.2f, detection bound %.6f\n",
              std::string(to_string(classify_shark(p))).c_str(), shark_height(p), detection_bound(result.Q, p));
}
