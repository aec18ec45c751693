#pragma once

#include <cstddef>
#include <string>

namespace autosage {

// Host capability summary for the cost model. bw_eff / flops_eff come from
// a one-time micro-calibration (streaming triad, fused multiply-add loop)
// unless supplied explicitly. device_sig folds in the artifact version so
// kernel changes invalidate cached decisions.
struct DeviceProfile {
    std::string device_sig;
    double bw_eff = 0.0;     // bytes/sec
    double flops_eff = 0.0;  // FLOP/sec
    std::size_t cores = 1;

    // Calibrated profile for this host; the measurement runs once per
    // process and is reused afterwards.
    static const DeviceProfile& host();

    // Fixed profile for tests and replay (no measurement).
    static DeviceProfile fixed(double bw_eff, double flops_eff, std::size_t cores,
                               const std::string& sig_tag = "fixed");
};

std::string host_device_sig();

} // namespace autosage
