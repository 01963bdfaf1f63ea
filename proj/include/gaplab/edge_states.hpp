#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gaplab/ground_space.hpp"
#include "gaplab/model.hpp"
#include "gaplab/transfer.hpp"

namespace gaplab::edge {

enum class Side { L, R };

// Everything the boundary-state formulas need, bundled once per model.
struct EdgeData {
  model::ClassATuple t;
  transfer::SpectralTripleII triple;
  transfer::DecayConstants dc;
  int l_B = -1;
  // Convenience copies.
  Mat p;  // PhatR
  Mat q;  // PhatL
  Index k = 0;
  int n = 0;
};

EdgeData make_edge_data(const model::ClassATuple& t, int dc_N_max = 60);

// Block identification between boundary density matrices (on C^{n0 (k_side+1)})
// and the corresponding corner of M_k.
Mat embed_boundary(const EdgeData& ed, Side side, const Mat& small);
Mat restrict_boundary(const EdgeData& ed, Side side, const Mat& big);

// Edge map of a window observable: for side L the window is [-l, -1] and the
// map is A |-> sum_{words} <psi_w, A psi_w'> B_{w'}^* rho B_w; for side R the
// window is [0, l-1] and the map is A |-> sum <psi_w, A psi_w'> B_w e B_{w'}^*.
// The window length is inferred from the matrix size (must be a power of n).
Mat edge_map(const EdgeData& ed, Side side, const Mat& A_window);

// Expectation of a window observable in the boundary state induced by the
// small density matrix sigma. pad = number of identity sites between the
// window and the chain end (toward the origin for side L, from site 0 for
// side R).
cd xi_state(const EdgeData& ed, Side side, const Mat& sigma_small,
            const Mat& A_window, int pad = 0);

// Distinguished boundary states induced by X in p M_k q.
Mat sigma_L_of_X(const EdgeData& ed, const Mat& X);  // on C^{n0(kL+1)}
Mat sigma_R_of_X(const EdgeData& ed, const Mat& X);  // on C^{n0(kR+1)}

// Limiting bulk expectation of a window observable (position independent).
cd omega_infty(const EdgeData& ed, const Mat& A_window);
// Same with identity padding inserted between two windows A and C separated
// by gap sites (transfer powers inserted, no dense blowup).
cd omega_infty_pair(const EdgeData& ed, const Mat& A_window, int gap,
                    const Mat& C_window);

struct WindowReport {
  int l = 0;
  std::vector<int> N_list;
  std::vector<Mat> reduced;  // window reduced density of the normalized
                             // ground-space projection, one per N
  Mat limit;                 // averaged boundary-state window density
  std::vector<double> trace_distances;
  la::DecayFit fit;
  std::vector<double> support_floor;  // min nonzero eigenvalue of the limit
                                      // window density, lengths 1..l
};

// Window [0, l-1] at the left end of the N-site chain; N values above the
// dense cap are computed via Gram-operator contractions (no n^N vectors).
WindowReport finite_chain_window(const EdgeData& ed, int m,
                                 const std::vector<int>& N_list, int l);

struct CorrelationReport {
  int r_min = 0;
  std::vector<double> values;  // |connected correlator| at r = r_min..r_max
  la::DecayFit fit;
  bool fit_skipped = false;
  double transfer_second = 0;  // second-largest |transfer eigenvalue|
  double rate_accuracy = 0;    // |fit.s - transfer_second| / transfer_second
};

// A at [0, lA-1], C at [r, r + lC - 1] for r = lA..r_max.
CorrelationReport correlation_decay(const EdgeData& ed, const Mat& A,
                                    const Mat& C, int r_max);

struct TranslationOverlapReport {
  bool found = false;
  int N = -1;  // first N >= 1 with overlap above tol
  std::vector<double> overlaps;  // N = 0..N_max (entry 0 is informational)
};

// Overlap Tr(sigma kappa_N) of a left boundary state with its N-step
// pullback; the search starts at N = 1 (a 0-step pullback is the state
// itself). "not found" is a reportable outcome, not an error.
TranslationOverlapReport translation_overlap(const EdgeData& ed,
                                             const Mat& sigma_small,
                                             int N_max = 16,
                                             double tol = 1e-12);

// Best window-observable separation of two boundary states at window length
// l_B: the trace norm of the dual window operator of the difference
// functional (the optimum over unit-norm Hermitian window observables).
double edge_distinguishability(const EdgeData& ed, Side side, const Mat& s1,
                               const Mat& s2);

}  // namespace gaplab::edge
