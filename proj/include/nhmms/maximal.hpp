#pragma once

#include <optional>

#include "nhmms/calculus.hpp"
#include "nhmms/catalog.hpp"

namespace nhmms {

/// M^{#,(beta)} f(x): oscillation sup over candidate balls containing x
/// plus the sup of |m_B f - m_Q f| / K^(beta)_{B,Q} over doubling pairs
/// x in B subset Q.
SpaceFunction sharp_maximal(const BallCatalog& catalog, const SpaceFunction& f, double beta);

SpaceFunction sharp_maximal(const MetricMeasureSpace& space, const DominatingFunction& lambda,
                            const SpaceFunction& f, double beta,
                            std::optional<double> beta0 = std::nullopt);

/// Non-centered doubling maximal function: sup over doubling candidate
/// balls containing x of the mean of |f|. Balls small enough to hold only
/// their center are doubling, so the result dominates |f|.
SpaceFunction doubling_maximal(const MetricMeasureSpace& space, const SpaceFunction& f,
                               double beta0);

/// sup over candidate balls B containing x of
/// { mu(rho B)^-(1 - alpha r) int_B |f|^r }^(1/r). Requires alpha r < 1.
SpaceFunction fractional_maximal(const MetricMeasureSpace& space, const SpaceFunction& f,
                                 double r, double rho, double alpha);

}  // namespace nhmms
