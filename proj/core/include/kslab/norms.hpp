#pragma once

#include "kslab/lorentz.hpp"
#include "kslab/radial.hpp"
#include "kslab/torus.hpp"

namespace kslab {

RearrangementProfile rearrange(const TorusField& f);
RearrangementProfile rearrange(const RadialField& f);

double lorentz_norm(const TorusField& f, LorentzParams params);
double lorentz_norm(const RadialField& f, LorentzParams params);

/// Direct grid L^p norm with the cell measure; p = inf gives max |f|.
double lp_norm(const TorusField& f, double p);

/// Working norm of the torus theory, L^{n/2,inf}; at n = 2 the weak-norm
/// definition degenerates to the L^1 norm (p = 1 branch).
double working_norm(const TorusField& f, int dim);

/// Working norm of the hyperbolic theory, L^{p/2}(H^n).
double working_norm(const RadialField& f, double norm_p);

HolderCheck holder_ratio(const TorusField& f, const TorusField& g,
                         const HolderExponents& e);
HolderCheck holder_ratio(const RadialField& f, const RadialField& g,
                         const HolderExponents& e);

}  // namespace kslab
