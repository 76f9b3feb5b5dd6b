#include "epnrec/community.hpp"

#include <cmath>
#include <set>

#include "epnrec/errors.hpp"

namespace epnrec::community {

std::int64_t CommunityModel::total_population() const {
    std::int64_t p = 0;
    for (const auto& c : cells) p += c.population;
    return p;
}

void CommunityModel::validate() const {
    if (cells.empty()) throw ModelError("community: no grid cells");
    if (retailers.empty()) throw ModelError("community: no retailers");
    std::set<std::string> ids;
    for (const auto& c : cells) {
        if (c.population < 0)
            throw ModelError("community: negative population in cell " + c.id);
        if (!ids.insert(c.id).second)
            throw ModelError("community: duplicate cell id " + c.id);
    }
    for (const auto& r : retailers) {
        if (!(r.capacity > 0.0))
            throw ModelError("community: retailer " + r.id +
                             " capacity must be > 0");
    }
    if (!(gravity.b < 0.0))
        throw ModelError("community: gravity constant b must be negative");
    if (gravity.travel_time.size() != cells.size())
        throw ModelError("community: travel-time matrix row count != cells");
    for (const auto& row : gravity.travel_time) {
        if (row.size() != retailers.size())
            throw ModelError(
                "community: travel-time matrix column count != retailers");
        for (double t : row)
            if (!(t >= 0.0) || !std::isfinite(t))
                throw ModelError("community: travel times must be finite and >= 0");
    }
    if (cell_load_nodes.size() != cells.size())
        throw ModelError("community: cell load-point list size != cells");
    if (total_population() <= 0)
        throw ModelError("community: total population must be > 0");
}

std::vector<double> retailer_assignment_probs(const CommunityModel& cm,
                                              std::size_t cell_index) {
    if (cm.retailers.empty())
        throw ModelError("gravity model: no retailers defined");
    const auto& times = cm.gravity.travel_time.at(cell_index);
    std::vector<double> q(cm.retailers.size());
    double denom = 0.0;
    for (std::size_t r = 0; r < q.size(); ++r) {
        q[r] = cm.retailers[r].capacity * std::exp(cm.gravity.b * times[r]);
        denom += q[r];
    }
    if (!std::isfinite(denom) || denom <= 0.0)
        throw NumericError(
            "gravity model: normalization degenerated for cell " +
            cm.cells[cell_index].id + " (b*T magnitude out of range)");
    for (double& v : q) v /= denom;
    return q;
}

std::vector<std::vector<double>> expected_assignment_matrix(
    const CommunityModel& cm) {
    std::vector<std::vector<double>> m;
    m.reserve(cm.cells.size());
    for (std::size_t c = 0; c < cm.cells.size(); ++c)
        m.push_back(retailer_assignment_probs(cm, c));
    return m;
}

}  // namespace epnrec::community
