#include "ampfsi/modes.hpp"

namespace ampfsi::modes {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::WeaklyStable: return "weakly-stable";
    case Verdict::Unstable: return "unstable";
    case Verdict::UnconditionallyUnstable: return "unconditionally-unstable";
    case Verdict::OutsideHypotheses: return "outside-hypotheses";
  }
  return "unknown";
}

}  // namespace ampfsi::modes
