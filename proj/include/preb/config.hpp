#pragma once

#include "preb/model_builder.hpp"
#include "preb/spectral_bath.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace preb {

struct BathConfig {
    SpectralFunction spectral;
    BathThermalSpec thermal;
};

enum class ChainMethod { tridiag, recursion };

struct ProcessConfig {
    double tau = 1.0;
    int l0 = 10;
    double tau_r_factor = 10.0;
    int depth = 0;     // 0 chooses the chain depth from tau
    int n_modes = 0;   // 0 means max(8192, 50 x depth)
    ChainMethod method = ChainMethod::tridiag;
    int grid_points = 8192;
    double tail_tolerance = 0.05;
};

struct SweepSpec {
    enum class Axis { tau, lambda, mu, beta1 };

    Axis axis = Axis::tau;
    double min = 0.1;
    double max = 10.0;
    int points = 10;
    bool log_spacing = false;

    void validate() const;
    std::vector<double> values() const;
};

std::string to_string(SweepSpec::Axis axis);

struct RunConfig {
    SystemSpec system = SystemSpec::two_site();
    std::array<BathConfig, 2> baths;
    ProcessConfig process;
    std::optional<SweepSpec> sweep;

    void validate() const;
};

// Two-site system, Lorentzian baths peaked at 2 and -1 with kappa = 2 and cutoff 6, mu = -2.
RunConfig heat_engine_preset(double width = 0.05);    // beta = (0.1, 1)
RunConfig refrigerator_preset(double width = 0.05);   // beta = (0.7, 1)
RunConfig equal_bath_preset(double width = 0.05);     // beta = (1, 1)

RunConfig parse_config(std::istream& is, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

// Copy of cfg with the sweep axis set to value (lambda and mu apply to both baths).
RunConfig with_axis(const RunConfig& cfg, SweepSpec::Axis axis, double value);

RunConfig with_width(const RunConfig& cfg, double width);

} // namespace preb
