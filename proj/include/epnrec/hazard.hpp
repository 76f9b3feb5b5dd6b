#ifndef EPNREC_HAZARD_HPP
#define EPNREC_HAZARD_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace epnrec::hazard {

struct EventSpec {
    double magnitude = 0.0;  // Mw, sanity-bounded to [4, 9]
    double epi_x = 0.0;      // epicenter, planar km
    double epi_y = 0.0;
    double depth_km = 0.0;

    void validate() const;
};

// Simplified point-source attenuation:
//   ln PGA = beta0 + beta1 (Mw - 6) - beta2 ln(R_hyp + c_near)
// with R_hyp = sqrt(epicentral^2 + depth^2). Coefficients are inputs;
// tools/fit_attenuation.py solves beta0 for a chosen anchor point.
struct AttenuationModel {
    double beta0 = 0.0;
    double beta1 = 0.0;
    double beta2 = 1.0;       // > 0, decay with distance
    double c_near_km = 1.0;   // > 0, near-field saturation
    double sigma_inter = 0.0; // log-std of the event-wide residual
    double sigma_intra = 0.0; // log-std of per-site residuals

    void validate() const;
};

// One sampled intensity field: PGA (g) per component site plus the
// inter-event residual that was drawn for the whole field.
struct IMField {
    std::vector<double> pga_g;
    double eta = 0.0;
};

double median_pga(const EventSpec& event, double site_x, double site_y,
                  const AttenuationModel& model);

// ln pga_i = ln median_i + eta + eps_i, eta shared across sites,
// eps_i independent. Deterministic given seed.
IMField sample_im_field(const EventSpec& event,
                        std::span<const std::pair<double, double>> sites,
                        const AttenuationModel& model, std::uint64_t seed);

}  // namespace epnrec::hazard

#endif
