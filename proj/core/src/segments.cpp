#include "dppsum/segments.hpp"

#include <sstream>

namespace dppsum {

void validate_boundaries(const std::vector<int>& boundaries, int n_frames) {
  if (boundaries.empty()) {
    throw std::invalid_argument("segment boundaries must be non-empty");
  }
  int prev = 0;
  for (int end : boundaries) {
    if (end <= prev) {
      throw std::invalid_argument("segment boundaries must be strictly increasing from 0");
    }
    prev = end;
  }
  if (boundaries.back() != n_frames) {
    std::ostringstream msg;
    msg << "last segment boundary " << boundaries.back() << " must equal frame count "
        << n_frames;
    throw std::invalid_argument(msg.str());
  }
}

std::vector<int> uniform_segments(int n_frames, int segment_len) {
  if (n_frames < 1) throw std::invalid_argument("uniform_segments: n_frames must be >= 1");
  if (segment_len < 1) throw std::invalid_argument("uniform_segments: segment_len must be >= 1");
  std::vector<int> ends;
  for (int end = segment_len; end < n_frames; end += segment_len) {
    ends.push_back(end);
  }
  ends.push_back(n_frames);
  return ends;
}

int segment_start(const std::vector<int>& boundaries, int segment) {
  return segment == 0 ? 0 : boundaries[segment - 1];
}

int segment_length(const std::vector<int>& boundaries, int segment) {
  return boundaries[segment] - segment_start(boundaries, segment);
}

Selection frames_to_segments(const Selection& frame_summary,
                             const std::vector<int>& boundaries) {
  if (boundaries.empty()) {
    throw std::invalid_argument("segment boundaries must be non-empty");
  }
  validate_boundaries(boundaries, boundaries.back());
  validate_selection(frame_summary, boundaries.back());
  Selection segments;
  std::size_t s = 0;
  for (int frame : frame_summary) {
    while (frame >= boundaries[s]) ++s;
    if (segments.empty() || segments.back() != static_cast<int>(s)) {
      segments.push_back(static_cast<int>(s));
    }
  }
  return segments;
}

Selection middle_frames(const Selection& segments, const std::vector<int>& boundaries) {
  validate_selection(segments, segment_count(boundaries));
  Selection frames;
  for (int s : segments) {
    const int start = segment_start(boundaries, s);
    const int len = segment_length(boundaries, s);
    frames.push_back(start + (len - 1) / 2);
  }
  return frames;
}

}  // namespace dppsum
