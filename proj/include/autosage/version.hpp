#pragma once

namespace autosage {

// Bumped on any change that can invalidate cached schedule decisions.
inline constexpr const char* kArtifactVersion = "autosage-0.1.0";

} // namespace autosage
