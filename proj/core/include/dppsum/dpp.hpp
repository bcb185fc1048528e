#ifndef DPPSUM_DPP_HPP
#define DPPSUM_DPP_HPP

#include "dppsum/types.hpp"

namespace dppsum {

/// log det(A) of a symmetric PSD matrix, via LDLT in log space.
/// Returns -inf when A is singular within tolerance; throws NumericalError
/// when A is indefinite beyond tolerance. An empty matrix has log det 0.
double log_det_psd(const Matrix& a);

/// log det(L + I). Retries once with a diagonal jitter of 1e-10 * trace/N
/// when the factorization fails, then throws NumericalError.
double log_partition(const Matrix& kernel);

/// log P(y; L) = log det(L_y) - log det(L + I). -inf for zero-probability
/// subsets (singular minor, e.g. duplicated items).
double subset_log_prob(const Matrix& kernel, const Selection& subset);

/// Exhaustive argmax of det(L_y) over all 2^N subsets; N <= 20.
/// Ties resolved by smaller cardinality, then lexicographically smaller
/// index list (so the empty set wins an all-way tie).
Selection map_exact(const Matrix& kernel);

/// Greedy ascent: starting from the empty set, repeatedly add the item with
/// the largest determinant gain while the gain is strictly > 1; ties go to
/// the smallest index. det of the result never exceeds the exact optimum.
Selection map_greedy(const Matrix& kernel);

/// Kernel of the DPP conditioned on all of `forced` being selected, over the
/// remaining items in ascending index order:
///   L' = ([(L + I_comp)^-1]_comp)^-1 - I
/// with I_comp the identity restricted to non-forced indices. Throws
/// NumericalError when the forced set has zero probability. forced = {}
/// returns the kernel unchanged.
Matrix condition_on(const Matrix& kernel, const Selection& forced);

}  // namespace dppsum

#endif  // DPPSUM_DPP_HPP
