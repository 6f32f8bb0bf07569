#pragma once

namespace opdyn {

enum class BaseNorm { L1, L2, Sup };

inline const char* base_norm_name(BaseNorm n) {
  switch (n) {
    case BaseNorm::L1: return "l1";
    case BaseNorm::L2: return "l2";
    case BaseNorm::Sup: return "sup";
  }
  return "?";
}

// Norm tag carried by operators and used when measuring vectors. A rescaled
// tag means sup_n ||T^n x|| truncated at `horizon`; it can only be minted via
// make_rescaled_tag (power_bound.hpp), which demands a power-bound
// certificate, so an unbounded operator can never carry one.
struct NormTag {
  BaseNorm base = BaseNorm::L2;
  bool rescaled = false;
  int horizon = 0;  // rescale window; meaningful only when rescaled

  friend bool operator==(const NormTag& a, const NormTag& b) {
    return a.base == b.base && a.rescaled == b.rescaled &&
           (!a.rescaled || a.horizon == b.horizon);
  }
};

inline NormTag l1_tag() { return NormTag{BaseNorm::L1, false, 0}; }
inline NormTag l2_tag() { return NormTag{BaseNorm::L2, false, 0}; }
inline NormTag sup_tag() { return NormTag{BaseNorm::Sup, false, 0}; }

}  // namespace opdyn
