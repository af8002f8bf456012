#ifndef FR_CORE_ACCEPTANCE_HPP
#define FR_CORE_ACCEPTANCE_HPP

#include <iosfwd>
#include <functional>
#include <string>
#include <vector>

namespace fr {

/// Tolerances of the acceptance suite. Every field can be overridden by
/// name (see set_threshold) so a deliberately broken tolerance can be
/// shown to fail.
struct Thresholds {
  double remez_sharpness_rel = 0.01;     // 1
  double bound_order_violations = 0.0;   // 2
  double gorin_violations = 0.0;         // 3
  double cartan_violations = 0.0;        // 4
  double ahlfors_spread = 25.0;          // 5
  double ahlfors_depth_change = 0.10;    // 5
  double weak_remez_noise = 0.05;        // 6
  double markov_max_over_median = 50.0;  // 7
  double ek_l2_tol = 1e-6;               // 8
  double ek_linf_tol = 1e-3;             // 8
  double c_omega_tol = 1e-9;             // 9
  double majorant_cap_slack = 1e-6;      // 9
  double extension_reproduction = 1e-8;  // 10
  double extension_linearity = 1e-9;     // 10
  double extension_stability = 2.0;      // 10
  double bmo_depth_ratio = 2.0;          // 11
};

/// Assigns a field by name; false when the name is unknown.
bool set_threshold(Thresholds& t, const std::string& name, double value);
std::vector<std::string> threshold_names();

struct CriterionResult {
  int id = 0;
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  std::string relation;  ///< how measured compares with threshold, e.g. "<="
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

/// Runs the eleven acceptance criteria in order;
/// `on_result` sees each criterion as soon as it finishes.
std::vector<CriterionResult> run_acceptance(const Thresholds& t,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// One formatted line: "[PASS] 3 gorin_cover ...".
std::string format_result(const CriterionResult& r);

}  // namespace fr

#endif
