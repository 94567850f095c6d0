// Minimal end-to-end tour: simulate a sparse regression problem, fit the
// lasso path with look-ahead screening, and print per-step summaries.

#include <lassoscreen/lassoscreen.hpp>

#include <cstdio>

namespace ls = lassoscreen;

int main() {
  ls::SimSpec sim_spec;
  sim_spec.n = 100;
  sim_spec.p = 500;
  sim_spec.k_signals = 5;
  sim_spec.snr = 2.0;
  sim_spec.seed = 42;

  const ls::SimData sim = ls::generate(sim_spec);
  auto [data, info] = ls::standardize(sim.X, sim.y);

  const ls::PathSpec spec = ls::default_path_spec(data);
  const ls::PathResult result =
      ls::fit_path(data, spec, ls::Strategy::gap_safe_aws_lookahead);

  std::printf("%4s  %12s  %10s  %8s  %10s  %10s\n", "step", "lambda",
              "dev_ratio", "active", "lookahead", "dynamic");
  for (ls::Index k = 0; k < result.steps_done(); ++k) {
    ls::Index active = 0;
    for (ls::Index j = 0; j < data.p; ++j) active += result.betas(j, k) != 0.0;
    std::printf("%4td  %12.6f  %10.6f  %8td  %10td  %10td\n",
                static_cast<std::ptrdiff_t>(k), result.lambdas_done[k],
                result.dev_ratios[k], static_cast<std::ptrdiff_t>(active),
                static_cast<std::ptrdiff_t>(ls::count_at_step_by_source(
                    result.mask, k, ls::ScreenSource::look_ahead)),
                static_cast<std::ptrdiff_t>(ls::count_at_step_by_source(
                    result.mask, k, ls::ScreenSource::gap_safe_dynamic)));
  }
  std::printf("stopped after %td steps (%s)\n",
              static_cast<std::ptrdiff_t>(result.steps_done()),
              ls::to_string(result.stop_reason));
  return 0;
}
