#include "gwcca/kernels.hpp"

#include <cctype>
#include <sstream>

namespace gwcca {

KernelFamily parse_kernel_family(std::string_view name) {
  std::string key;
  for (char c : name) {
    if (c == '-' || c == '_') continue;
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (key == "gaussian") return KernelFamily::gaussian;
  if (key == "exponential") return KernelFamily::exponential;
  if (key == "boxcar") return KernelFamily::boxcar;
  if (key == "bisquare") return KernelFamily::bisquare;
  if (key == "tricube") return KernelFamily::tricube;
  throw ConfigError("unknown kernel family '" + std::string(name) +
                    "' (expected gaussian, exponential, boxcar, bisquare or tricube)");
}

std::string_view to_string(KernelFamily family) noexcept {
  switch (family) {
    case KernelFamily::gaussian: return "gaussian";
    case KernelFamily::exponential: return "exponential";
    case KernelFamily::boxcar: return "boxcar";
    case KernelFamily::bisquare: return "bisquare";
    case KernelFamily::tricube: return "tricube";
  }
  return "unknown";
}

void KernelSpec::validate(Eigen::Index n) const {
  if (const auto* fixed_bw = std::get_if<FixedBandwidth>(&bandwidth)) {
    if (!(fixed_bw->radius > 0.0) || !std::isfinite(fixed_bw->radius)) {
      throw ParameterError("fixed bandwidth must be a positive finite distance");
    }
    return;
  }
  const auto k = std::get<AdaptiveBandwidth>(bandwidth).neighbors;
  if (k < 1 || k > n) {
    throw ParameterError("adaptive bandwidth k = " + std::to_string(k) + " outside [1, " +
                         std::to_string(n) + "]");
  }
}

std::string KernelSpec::describe() const {
  std::ostringstream out;
  out << to_string(family);
  if (const auto* fixed_bw = std::get_if<FixedBandwidth>(&bandwidth)) {
    out << " fixed r=" << fixed_bw->radius;
  } else {
    out << " adaptive k=" << std::get<AdaptiveBandwidth>(bandwidth).neighbors;
  }
  return out.str();
}

}  // namespace gwcca
