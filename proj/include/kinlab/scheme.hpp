#pragma once

#include <stdexcept>
#include <string>

namespace kinlab {

/// One-step scheme variants. The kinetic coupling is always implicit;
/// the name states how the transport term is treated.
enum class SchemeKind {
    ImplicitDiffusion,
    ExplicitDiffusion,
    ImplicitAdvection,
    ExplicitAdvection,
    ImexAdvectionDiffusion,  // implicit diffusion, explicit advection
};

inline std::string to_string(SchemeKind k) {
    switch (k) {
        case SchemeKind::ImplicitDiffusion: return "implicit-diffusion";
        case SchemeKind::ExplicitDiffusion: return "explicit-diffusion";
        case SchemeKind::ImplicitAdvection: return "implicit-advection";
        case SchemeKind::ExplicitAdvection: return "explicit-advection";
        case SchemeKind::ImexAdvectionDiffusion: return "imex-advection-diffusion";
    }
    throw std::invalid_argument("to_string: unknown scheme kind");
}

}  // namespace kinlab
