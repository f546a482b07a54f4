#pragma once

// The full chain: hitting set answered by phased Find-OV, Find-OV answered by
// sampling plus maximum orthogonal matching, and MOM answered geometrically
// (gadget, symmetrization, Euclidean matching, decode).  Everything downstream
// of the seed is deterministic, so a pipeline run is reproducible bit for bit.

#include <cstdint>
#include <utility>
#include <vector>

#include "ovemd/gadgets.hpp"
#include "ovemd/ov_suite.hpp"

namespace ovemd {

struct PipelineResult {
  HsVerdict verdict = HsVerdict::no_hitting_vector;
  std::vector<HsPhaseTrace> trace;
};

// The small brute-force floor keeps the geometric solver on the hot path;
// raising it trades fidelity of the chain for speed.
inline PipelineResult pipeline_hs_via_emd(const BinaryPair& p, std::uint64_t seed,
                                          int brute_force_floor = 8) {
  FindOvSolver solver =
      sampling_findov_solver(Ratio(1, 2), brute_force_floor, emd_mom_solver());
  auto [verdict, trace] = hitting_set_phased(p, solver, seed);
  return PipelineResult{verdict, std::move(trace)};
}

}  // namespace ovemd
