#pragma once

#include <cstdint>
#include <vector>

#include "ccv/corpus.hpp"
#include "ccv/vocabulary.hpp"

namespace ccv {

struct SynthOptions {
  std::size_t descriptions = 400;
  std::uint64_t seed = 7;
  double no_color_rate = 0.06;      // gold color is the sentinel
  double no_work_type_rate = 0.08;  // garment noun outside the work-type lexicon
  double secondary_color_rate = 0.65;
};

// Templated garment descriptions:
//   "<adjective> <color term> <material> <work type>. <detail sentence, often
//    naming a secondary color>. <neutral sentence>."
// Records are validated against `vocab` before being returned.
std::vector<DescriptionRecord> synthesize_corpus(const SynthOptions& options, const Vocabulary& vocab);

}  // namespace ccv
