#ifndef EPNREC_COMMUNITY_HPP
#define EPNREC_COMMUNITY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace epnrec::community {

struct GridCell {
    std::string id;
    double x = 0.0;  // centroid, planar km
    double y = 0.0;
    std::int64_t population = 0;
};

struct Retailer {
    std::string id;
    double x = 0.0;
    double y = 0.0;
    double capacity = 0.0;        // relative weight, > 0
    std::string load_node;        // power network node it draws from
};

// Gravity trip-distribution model: P(r|c) proportional to
// capacity_r * exp(b * T_cr), b < 0.
struct GravityModel {
    double b = -0.1;                                // per travel-time minute
    std::vector<std::vector<double>> travel_time;   // cells x retailers, minutes
};

struct CommunityModel {
    std::vector<GridCell> cells;
    std::vector<Retailer> retailers;
    GravityModel gravity;
    std::vector<std::string> cell_load_nodes;  // parallel to cells

    std::int64_t total_population() const;

    // Throws ModelError on any broken invariant (b >= 0, negative
    // travel time, dimension mismatch, empty retailer list, zero total
    // population, ...).
    void validate() const;
};

// q_r = w_r exp(b T_cr) / sum_s w_s exp(b T_cs) for one cell.
// Throws ModelError for an empty retailer list and NumericError when
// the normalization degenerates (all terms underflow to zero or a
// non-finite value appears).
std::vector<double> retailer_assignment_probs(const CommunityModel& cm,
                                              std::size_t cell_index);

// Row c = retailer_assignment_probs(c). Rows sum to 1 within 1e-12.
std::vector<std::vector<double>> expected_assignment_matrix(
    const CommunityModel& cm);

}  // namespace epnrec::community

#endif
