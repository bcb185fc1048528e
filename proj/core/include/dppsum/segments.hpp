#ifndef DPPSUM_SEGMENTS_HPP
#define DPPSUM_SEGMENTS_HPP

#include "dppsum/types.hpp"

namespace dppsum {

/// Segment boundaries are exclusive end indices: boundaries[t] ends segment t,
/// strictly increasing, with boundaries.back() == n_frames.
void validate_boundaries(const std::vector<int>& boundaries, int n_frames);

/// Contiguous segments of `segment_len` frames; the last may be shorter.
std::vector<int> uniform_segments(int n_frames, int segment_len);

inline int segment_count(const std::vector<int>& boundaries) {
  return static_cast<int>(boundaries.size());
}

int segment_start(const std::vector<int>& boundaries, int segment);
int segment_length(const std::vector<int>& boundaries, int segment);

/// Frame-level summary -> segment-level: a segment is selected iff it
/// contains at least one summary frame.
Selection frames_to_segments(const Selection& frame_summary,
                             const std::vector<int>& boundaries);

/// Middle frame of each selected segment (lower middle for even lengths).
Selection middle_frames(const Selection& segments, const std::vector<int>& boundaries);

}  // namespace dppsum

#endif  // DPPSUM_SEGMENTS_HPP
