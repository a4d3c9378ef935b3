// medium_spec.hpp — Declarative description of the dielectric medium

#pragma once

#include <string>
#include <vector>

namespace escat {

enum class MediumVariant { Waveguide1D, FreeSpace3D, Composite };

struct Waveguide1DSpec {
    std::string right_channel{"right"};
    std::string left_channel{"left"};
    // Carrier frequency in units of the reference rate. Fixes the first-order
    // wavenumber shift k(w) = 2*pi*(1 + w/carrier_frequency); 0 disables
    // dispersion (narrowband limit).
    double carrier_frequency{0.0};
};

struct FreeSpace3DSpec {
    std::string channel{"rad"};
    double carrier_frequency{0.0};
};

struct GreenMediumSpec {
    MediumVariant variant{MediumVariant::Waveguide1D};
    Waveguide1DSpec waveguide;
    FreeSpace3DSpec freespace;
    std::vector<GreenMediumSpec> members; // composite only

    static GreenMediumSpec waveguide1d(double carrier_frequency = 0.0) {
        GreenMediumSpec s;
        s.variant = MediumVariant::Waveguide1D;
        s.waveguide.carrier_frequency = carrier_frequency;
        return s;
    }
    static GreenMediumSpec freespace3d(std::string channel = "rad") {
        GreenMediumSpec s;
        s.variant = MediumVariant::FreeSpace3D;
        s.freespace.channel = std::move(channel);
        return s;
    }
    static GreenMediumSpec composite(std::vector<GreenMediumSpec> parts) {
        GreenMediumSpec s;
        s.variant = MediumVariant::Composite;
        s.members = std::move(parts);
        return s;
    }

    std::vector<std::string> channel_ids() const;
    // throws InvalidSpec on duplicate channel ids
    void validate() const;
};

} // namespace escat
