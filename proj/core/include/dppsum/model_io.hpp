#ifndef DPPSUM_MODEL_IO_HPP
#define DPPSUM_MODEL_IO_HPP

#include "dppsum/transfer.hpp"

namespace dppsum {

/// Model file: a JSON document holding the similarity configuration,
/// category mode, granularity, per-exemplar alpha values keyed by exemplar
/// id (nested per category in hard/soft modes), the metric diagonal and the
/// corpus hash the model was trained against. Floating-point values
/// round-trip bit-exactly. Exemplar features are not embedded; loading
/// rebinds the model to a corpus by id.
void save_model(const TransferModel& model, const std::string& path);

/// Loads a model file and binds it to `corpus`: the model's exemplars are
/// the corpus entries whose ids the file records, in corpus order. Every
/// recorded id must resolve; extra corpus videos are simply not exemplars.
/// Throws std::invalid_argument on schema or binding errors.
TransferModel load_model(const std::string& path, const std::vector<Exemplar>& corpus);

/// The parts of a model file needed to rebuild its exemplars from a corpus,
/// without binding.
struct ModelHeader {
  Granularity granularity = Granularity::frame;
  CategoryMode category_mode = CategoryMode::none;
  double oracle_budget = 0.15;
  std::string corpus_hash;
  std::vector<std::string> exemplar_ids;   // sorted
};

ModelHeader read_model_header(const std::string& path);

}  // namespace dppsum

#endif  // DPPSUM_MODEL_IO_HPP
