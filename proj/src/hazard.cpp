#include "epnrec/hazard.hpp"

#include <cmath>

#include "epnrec/errors.hpp"
#include "epnrec/rng.hpp"

namespace epnrec::hazard {

void EventSpec::validate() const {
    if (!(magnitude >= 4.0 && magnitude <= 9.0))
        throw ModelError("event: magnitude outside [4, 9]");
    if (!(depth_km >= 0.0)) throw ModelError("event: negative depth");
}

void AttenuationModel::validate() const {
    if (!(beta2 > 0.0))
        throw ModelError("attenuation: beta2 must be > 0 (decay with distance)");
    if (!(c_near_km > 0.0))
        throw ModelError("attenuation: c_near must be > 0");
    if (sigma_inter < 0.0 || sigma_intra < 0.0)
        throw ModelError("attenuation: sigmas must be >= 0");
}

double median_pga(const EventSpec& event, double site_x, double site_y,
                  const AttenuationModel& model) {
    const double dx = site_x - event.epi_x;
    const double dy = site_y - event.epi_y;
    const double r_hyp = std::sqrt(dx * dx + dy * dy +
                                   event.depth_km * event.depth_km);
    return std::exp(model.beta0 + model.beta1 * (event.magnitude - 6.0) -
                    model.beta2 * std::log(r_hyp + model.c_near_km));
}

IMField sample_im_field(const EventSpec& event,
                        std::span<const std::pair<double, double>> sites,
                        const AttenuationModel& model, std::uint64_t seed) {
    if (sites.empty()) throw ModelError("im field: no sites");
    Rng rng(seed);
    IMField field;
    field.eta = model.sigma_inter > 0.0 ? model.sigma_inter * rng.normal() : 0.0;
    field.pga_g.reserve(sites.size());
    for (const auto& [x, y] : sites) {
        const double eps =
            model.sigma_intra > 0.0 ? model.sigma_intra * rng.normal() : 0.0;
        field.pga_g.push_back(median_pga(event, x, y, model) *
                              std::exp(field.eta + eps));
    }
    return field;
}

}  // namespace epnrec::hazard
