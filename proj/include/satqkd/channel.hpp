#pragma once

// Satellite-ground free-space link model: Beer-Lambert extinction through
// an exponential atmosphere, Hufnagel-Valley turbulence profile, short-term
// beam broadening (Yura), beam-wander statistics and the wander-averaged
// aperture collection efficiency, combined into a transmittance chain with
// effective excess noise.

#include <cmath>
#include <limits>
#include <string>

#include "satqkd/errors.hpp"
#include "satqkd/math/quadrature.hpp"
#include "satqkd/math/special.hpp"

namespace satqkd::channel {

enum class Direction { uplink, downlink };
enum class DetectorTrust { ideal, untrusted };
enum class Detection { homodyne, heterodyne };

// Flat-slab secant mapping between path position and altitude is used for
// the slant integrals; it degrades past ~70 deg zenith, so that is the
// hard validity limit.
inline constexpr double kMaxZenithRad = 70.0 * M_PI / 180.0;

struct LinkGeometry {
  double altitude_m = 500e3;
  double zenith_rad = 0.0;
  Direction direction = Direction::downlink;
  double wavelength_m = 1550e-9;
  double tx_waist_m = 0.2;       // W0
  double rx_aperture_m = 0.75;   // radius a
  double pointing_rad = 1e-6;    // theta_p

  double wavenumber() const { return 2.0 * M_PI / wavelength_m; }
  double rayleigh_range() const {
    return 0.5 * wavenumber() * tx_waist_m * tx_waist_m;
  }
  double path_length() const { return altitude_m / std::cos(zenith_rad); }

  void validate() const {
    if (altitude_m <= 0.0) throw physics_error("altitude must be positive");
    if (zenith_rad < 0.0)
      throw physics_error("zenith angle must be non-negative");
    if (zenith_rad >= kMaxZenithRad)
      throw physics_error(
          "zenith angle >= 70 deg: outside the flat-slab validity domain");
    if (wavelength_m <= 0.0) throw physics_error("wavelength must be positive");
    if (tx_waist_m <= 0.0) throw physics_error("beam waist must be positive");
    if (rx_aperture_m <= 0.0)
      throw physics_error("aperture radius must be positive");
    if (pointing_rad < 0.0)
      throw physics_error("pointing error must be non-negative");
  }

  // Altitude above ground at path position s in [0, L].
  double altitude_at(double s) const {
    const double c = std::cos(zenith_rad);
    return direction == Direction::uplink ? s * c : altitude_m - s * c;
  }
};

struct AtmosphereParams {
  double wind_mps = 21.0;
  double c0 = 9.6e-14;             // ground-layer constant of the HV model
  double alpha0_per_m = 4e-7;      // sea-level extinction (1550 nm default)
  double scale_height_m = 6600.0;  // extinction scale height
  // HV profile coefficients and decay lengths
  double hv_wind_coeff = 8.1481e-56;
  double hv_mid_coeff = 2.7e-16;
  double hv_wind_decay_m = 1000.0;
  double hv_mid_decay_m = 1500.0;
  double hv_ground_decay_m = 100.0;
};

struct DetectorModel {
  DetectorTrust trust = DetectorTrust::ideal;
  double eta_dev = 0.6;
  double xi_det = 0.01;  // homodyne electronic noise; heterodyne uses 2x
};

struct ChannelReport {
  double eta_ext = 1.0;
  double w_rx_m = 0.0;      // short-term beam waist at the receiver plane
  double sigma_tb_m = 0.0;  // turbulence-induced wander
  double sigma_r_m = 0.0;   // total wander std deviation
  double eta_geo = 1.0;     // wander-averaged aperture efficiency
  double eta_total = 1.0;
  double xi_effective = 0.0;
  double yura_ratio = 0.0;  // 0.26 (r_s/W0)^{1/3}; warn above 0.3
  bool yura_warning = false;
};

// Refractive-index structure parameter C_n^2(h), Hufnagel-Valley profile.
inline double cn2(double h, const AtmosphereParams& atm) {
  if (h < 0.0) throw physics_error("cn2: altitude must be non-negative");
  const double v = atm.wind_mps;
  return atm.hv_wind_coeff * v * v * std::pow(h, 10.0) *
             std::exp(-h / atm.hv_wind_decay_m) +
         atm.hv_mid_coeff * std::exp(-h / atm.hv_mid_decay_m) +
         atm.c0 * std::exp(-h / atm.hv_ground_decay_m);
}

namespace detail {

// Initial knots for slant-path integrals: the integrands live on the first
// tens of km of altitude while the path is hundreds of km long.
inline std::vector<double> atmosphere_knots(const LinkGeometry& g) {
  const double sec = 1.0 / std::cos(g.zenith_rad);
  const double L = g.path_length();
  std::vector<double> knots;
  for (double h : {1e3, 5e3, 15e3, 40e3, 80e3}) {
    double s = h * sec;
    if (g.direction == Direction::downlink) s = L - s;
    if (s > 0.0 && s < L) knots.push_back(s);
  }
  return knots;
}

}  // namespace detail

// Beer-Lambert transmission exp(-int alpha(h) ds) along the slant path.
inline double extinction(const LinkGeometry& geom, const AtmosphereParams& atm) {
  geom.validate();
  const auto integrand = [&](double s) {
    return atm.alpha0_per_m *
           std::exp(-geom.altitude_at(s) / atm.scale_height_m);
  };
  math::QuadratureOptions opt;
  const double tau = math::integrate_segmented(
      integrand, 0.0, geom.path_length(), detail::atmosphere_knots(geom), opt);
  return std::exp(-tau);
}

// Turbulence coherence factor r_s of the uplink (transmitter-side
// weighting (L-z)/L). A turbulence-free profile returns +inf.
inline double coherence_rs(const LinkGeometry& geom,
                           const AtmosphereParams& atm) {
  geom.validate();
  if (geom.direction != Direction::uplink)
    throw physics_error("coherence_rs: defined for the uplink direction only");
  const double L = geom.path_length();
  const auto integrand = [&](double z) {
    return cn2(geom.altitude_at(z), atm) * std::pow((L - z) / L, 5.0 / 3.0);
  };
  const double integral = math::integrate_segmented(
      integrand, 0.0, L, detail::atmosphere_knots(geom), {});
  const double k = geom.wavenumber();
  const double arg = 0.42 * k * k * integral;
  if (arg <= 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(arg, -3.0 / 5.0);
}

namespace detail {

inline double beam_waist_given_rs(const LinkGeometry& geom, double z,
                                  double r_s) {
  const double w0 = geom.tx_waist_m;
  const double z0 = geom.rayleigh_range();
  double w2 = w0 * w0 * (1.0 + (z / z0) * (z / z0));
  if (geom.direction == Direction::uplink && std::isfinite(r_s)) {
    const double k = geom.wavenumber();
    const double bracket = 1.0 - 0.26 * std::pow(r_s / w0, 1.0 / 3.0);
    w2 += 35.28 * z * z / (k * k * r_s * r_s) * bracket * bracket;
  }
  return std::sqrt(w2);
}

}  // namespace detail

// Short-term beam waist at propagation distance z: Yura's broadened waist
// for the uplink, diffraction-only for the downlink (the atmosphere acts
// only over the last few tens of km there).
inline double beam_waist(const LinkGeometry& geom, const AtmosphereParams& atm,
                         double z) {
  geom.validate();
  if (z < 0.0 || z > geom.path_length() * (1.0 + 1e-12))
    throw physics_error("beam_waist: z outside [0, L]");
  const double r_s = geom.direction == Direction::uplink
                         ? coherence_rs(geom, atm)
                         : std::numeric_limits<double>::infinity();
  return detail::beam_waist_given_rs(geom, z, r_s);
}

// Diagnostic only: the downlink wander estimate 1.919 C_n^2(0) L^3 (2W0)^{-1/3},
// exposed so the "negligible against (L theta_p)^2" claim can be checked.
inline double downlink_wander_variance_estimate(const LinkGeometry& geom,
                                                const AtmosphereParams& atm) {
  const double L = geom.path_length();
  return 1.919 * cn2(0.0, atm) * L * L * L *
         std::pow(2.0 * geom.tx_waist_m, -1.0 / 3.0);
}

// Total wander standard deviation sigma_r: pointing contribution (L theta_p)
// plus, for the uplink, the turbulence term
//   sigma_TB^2 = 1.035 int C_n^2(z) (L-z)^2 W_ST^{-1/3}(z) dz.
// For the downlink the turbulence term is neglected (see the diagnostic
// estimate above).
inline double wander_sigma(const LinkGeometry& geom,
                           const AtmosphereParams& atm,
                           double* sigma_tb_out = nullptr) {
  geom.validate();
  const double L = geom.path_length();
  double sigma_tb2 = 0.0;
  if (geom.direction == Direction::uplink) {
    const double r_s = coherence_rs(geom, atm);
    const auto integrand = [&](double z) {
      const double w = detail::beam_waist_given_rs(geom, z, r_s);
      return cn2(geom.altitude_at(z), atm) * (L - z) * (L - z) *
             std::pow(w, -1.0 / 3.0);
    };
    sigma_tb2 = 1.035 * math::integrate_segmented(integrand, 0.0, L,
                                                  detail::atmosphere_knots(geom),
                                                  {});
  }
  if (sigma_tb_out) *sigma_tb_out = std::sqrt(sigma_tb2);
  const double pointing = L * geom.pointing_rad;
  return std::sqrt(pointing * pointing + sigma_tb2);
}

// Fraction of a Gaussian beam of waist W, displaced by r from the aperture
// axis, collected by a circular aperture of radius a:
//   eta(r) = (4/W^2) e^{-2r^2/W^2} int_0^a rho e^{-2rho^2/W^2} I_0(4 r rho/W^2) drho.
// The Bessel factor is evaluated in exponent-shifted form so large
// displacements cannot overflow.
inline double aperture_eta(double r, double w, double a) {
  if (w <= 0.0 || a <= 0.0 || r < 0.0)
    throw physics_error("aperture_eta: require W > 0, a > 0, r >= 0");
  const auto integrand = [&](double rho) {
    const double x = 4.0 * r * rho / (w * w);
    const double expo = -2.0 * (rho - r) * (rho - r) / (w * w);
    return rho * std::exp(expo) * math::bessel_i0_scaled(x);
  };
  math::QuadratureOptions opt;  // rel 1e-8
  return 4.0 / (w * w) * math::integrate(integrand, 0.0, a, opt);
}

// Wander-averaged efficiency: aperture_eta integrated against the Rayleigh
// distribution of the centroid deviation.
inline double mean_eta(double sigma_r, double w, double a) {
  if (sigma_r < 0.0) throw physics_error("mean_eta: sigma_r must be >= 0");
  if (sigma_r == 0.0) return aperture_eta(0.0, w, a);
  const auto integrand = [&](double r) {
    return aperture_eta(r, w, a) * r / (sigma_r * sigma_r) *
           std::exp(-r * r / (2.0 * sigma_r * sigma_r));
  };
  const double r_max = 12.0 * sigma_r;
  math::QuadratureOptions opt;
  return math::integrate(integrand, 0.0, r_max, opt);
}

// Full transmittance chain and effective excess noise for one link.
inline ChannelReport link_report(const LinkGeometry& geom,
                                 const AtmosphereParams& atm,
                                 const DetectorModel& det, double xi_ch,
                                 Detection detection) {
  geom.validate();
  if (xi_ch < 0.0) throw physics_error("channel excess noise must be >= 0");
  ChannelReport rep;
  rep.eta_ext = extinction(geom, atm);
  const double L = geom.path_length();
  if (geom.direction == Direction::uplink) {
    const double r_s = coherence_rs(geom, atm);
    rep.w_rx_m = detail::beam_waist_given_rs(geom, L, r_s);
    rep.yura_ratio = std::isfinite(r_s)
                         ? 0.26 * std::pow(r_s / geom.tx_waist_m, 1.0 / 3.0)
                         : 0.0;
    rep.yura_warning = rep.yura_ratio > 0.3;
  } else {
    rep.w_rx_m = detail::beam_waist_given_rs(
        geom, L, std::numeric_limits<double>::infinity());
  }
  rep.sigma_r_m = wander_sigma(geom, atm, &rep.sigma_tb_m);
  rep.eta_geo = mean_eta(rep.sigma_r_m, rep.w_rx_m, geom.rx_aperture_m);
  rep.eta_total = rep.eta_ext * rep.eta_geo;
  if (det.trust == DetectorTrust::untrusted) rep.eta_total *= det.eta_dev;

  if (det.trust == DetectorTrust::ideal) {
    rep.xi_effective = xi_ch;
  } else {
    const double xi_det =
        detection == Detection::heterodyne ? 2.0 * det.xi_det : det.xi_det;
    rep.xi_effective = xi_ch + xi_det / rep.eta_total;
  }
  return rep;
}

}  // namespace satqkd::channel
