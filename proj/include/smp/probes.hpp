#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "smp/types.hpp"

namespace smp {

/// A truncated point sequence standing in for x_n in uniformity tests. The
/// finite surrogate for "h(x_n) is Cauchy" is: the oscillation of h over the
/// last `window` points stays within `cauchy_tol`.
struct ProbeSequence {
  std::string id;
  std::vector<StatePoint> points;
  double cauchy_tol = 1e-3;
  int window = 16;
  std::optional<StatePoint> target_closure;  // set on closure-approach sequences
};

struct ProbeLibrary {
  std::vector<ProbeSequence> sequences;
  const ProbeSequence* find(const std::string& id) const;
};

/// Max pairwise |h(x_i) - h(x_j)| over the tail window.
double tail_oscillation(const TestFunction& h, const ProbeSequence& seq);

bool finite_cauchy(const TestFunction& h, const ProbeSequence& seq);

/// CSV schema: sequence_id,index,c0[,c1].
void write_probe_csv(const ProbeLibrary& lib, std::ostream& os);
ProbeLibrary load_probe_csv(std::istream& is);

}  // namespace smp
