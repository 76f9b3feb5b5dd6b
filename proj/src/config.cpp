#include "epnrec/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "epnrec/errors.hpp"
#include "epnrec/rng.hpp"

namespace epnrec::config {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end())
        throw ConfigError(where + ": missing field '" + key + "'");
    return *it;
}

double number(const json& j, const char* key, const std::string& where) {
    const auto& v = field(j, key, where);
    if (!v.is_number())
        throw ConfigError(where + ": field '" + key + "' must be a number");
    return v.get<double>();
}

std::array<double, 4> quad(const json& j, const char* key,
                           const std::string& where) {
    const auto& v = field(j, key, where);
    if (!v.is_array() || v.size() != 4)
        throw ConfigError(where + ": field '" + key +
                          "' must be an array of 4 numbers (DS1..DS4)");
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) out[i] = v[i].get<double>();
    return out;
}

std::pair<double, double> point(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2)
        throw ConfigError(where + ": expected [x, y]");
    return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

recovery::ServiceContext ScenarioModel::service_context(
    recovery::BenefitMode mode) const {
    recovery::ServiceContext ctx;
    ctx.net = &network;
    ctx.binding = &binding;
    ctx.assignment = &assignment;
    ctx.mode = mode;
    ctx.total_population = static_cast<double>(community.total_population());
    return ctx;
}

fragility::DamageScenario ScenarioModel::sample_scenario(
    std::uint64_t scenario_seed, std::uint64_t scenario_id) const {
    const auto field = hazard::sample_im_field(
        event, component_sites, attenuation, derive_seed(scenario_seed, 1));
    return fragility::sample_scenario(field, exposure, fragility_sets,
                                      restoration_tables,
                                      derive_seed(scenario_seed, 2),
                                      scenario_id);
}

ScenarioModel parse_model(const std::string& json_text,
                          const std::string& origin) {
    json root;
    try {
        root = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }

    ScenarioModel m;

    // --- network ------------------------------------------------------
    const auto& jnet = field(root, "network", origin);
    for (const auto& n : field(jnet, "nodes", "network"))
        m.network.node_ids.push_back(n.get<std::string>());
    std::map<std::string, int> node_of;
    for (std::size_t i = 0; i < m.network.node_ids.size(); ++i)
        node_of[m.network.node_ids[i]] = static_cast<int>(i);
    const auto need_node = [&](const std::string& id,
                               const std::string& where) {
        const auto it = node_of.find(id);
        if (it == node_of.end())
            throw ConfigError(where + ": unknown node '" + id + "'");
        return it->second;
    };
    std::map<std::pair<int, int>, int> edge_of;
    for (const auto& e : field(jnet, "edges", "network")) {
        if (!e.is_array() || e.size() != 2)
            throw ConfigError("network.edges: expected [a, b] pairs");
        int a = need_node(e[0].get<std::string>(), "network.edges");
        int b = need_node(e[1].get<std::string>(), "network.edges");
        if (a > b) std::swap(a, b);
        edge_of[{a, b}] = static_cast<int>(m.network.edges.size());
        m.network.edges.emplace_back(a, b);
    }
    for (const auto& s : field(jnet, "sources", "network"))
        m.network.sources.push_back(
            need_node(s.get<std::string>(), "network.sources"));

    for (const auto& jc : field(jnet, "components", "network")) {
        epn::Component c;
        c.id = field(jc, "id", "component").get<std::string>();
        c.cls = epn::component_class_from_string(
            field(jc, "class", "component " + c.id).get<std::string>());
        const auto& guard = field(jc, "guards", "component " + c.id);
        if (guard.contains("node")) {
            c.guards_node = true;
            c.element = need_node(guard["node"].get<std::string>(),
                                  "component " + c.id);
        } else if (guard.contains("edge")) {
            const auto& ge = guard["edge"];
            int a = need_node(ge.at(0).get<std::string>(), "component " + c.id);
            int b = need_node(ge.at(1).get<std::string>(), "component " + c.id);
            if (a > b) std::swap(a, b);
            const auto it = edge_of.find({a, b});
            if (it == edge_of.end())
                throw ConfigError("component " + c.id +
                                  ": guards an edge that is not in the edge list");
            c.guards_node = false;
            c.element = it->second;
        } else {
            throw ConfigError("component " + c.id +
                              ": guards must name a node or an edge");
        }
        const auto [sx, sy] = point(field(jc, "site", "component " + c.id),
                                    "component " + c.id + ".site");
        c.site_x = sx;
        c.site_y = sy;
        c.damageable = jc.value("damageable", true);
        m.network.components.push_back(std::move(c));
    }
    m.network.finalize();  // sorts components by id, builds guards/adjacency
    m.network.validate();

    // --- community ----------------------------------------------------
    const auto& jcom = field(root, "community", origin);
    for (const auto& jc : field(jcom, "cells", "community")) {
        community::GridCell cell;
        cell.id = field(jc, "id", "cell").get<std::string>();
        const auto [x, y] = point(field(jc, "centroid", "cell " + cell.id),
                                  "cell " + cell.id + ".centroid");
        cell.x = x;
        cell.y = y;
        cell.population = field(jc, "population", "cell " + cell.id)
                              .get<std::int64_t>();
        m.community.cells.push_back(cell);
        const std::string lp =
            field(jc, "load_point", "cell " + cell.id).get<std::string>();
        need_node(lp, "cell " + cell.id + ".load_point");
        m.community.cell_load_nodes.push_back(lp);
    }
    for (const auto& jr : field(jcom, "retailers", "community")) {
        community::Retailer r;
        r.id = field(jr, "id", "retailer").get<std::string>();
        const auto [x, y] = point(field(jr, "location", "retailer " + r.id),
                                  "retailer " + r.id + ".location");
        r.x = x;
        r.y = y;
        r.capacity = number(jr, "capacity", "retailer " + r.id);
        r.load_node =
            field(jr, "load_point", "retailer " + r.id).get<std::string>();
        need_node(r.load_node, "retailer " + r.id + ".load_point");
        m.community.retailers.push_back(std::move(r));
    }
    m.community.gravity.b = number(jcom, "gravity_b_per_minute", "community");

    if (jcom.contains("travel_time_matrix") &&
        !jcom["travel_time_matrix"].is_null()) {
        for (const auto& row : jcom["travel_time_matrix"]) {
            m.community.gravity.travel_time.emplace_back();
            for (const auto& v : row)
                m.community.gravity.travel_time.back().push_back(
                    v.get<double>());
        }
    } else {
        // travel time from straight-line distance at constant speed
        const double speed =
            number(jcom, "travel_speed_km_per_minute", "community");
        if (!(speed > 0.0))
            throw ConfigError("community.travel_speed_km_per_minute must be > 0");
        for (const auto& cell : m.community.cells) {
            auto& row = m.community.gravity.travel_time.emplace_back();
            for (const auto& r : m.community.retailers)
                row.push_back(std::hypot(cell.x - r.x, cell.y - r.y) / speed);
        }
    }
    m.community.validate();

    // --- derived bindings ---------------------------------------------
    for (std::size_t c = 0; c < m.community.cells.size(); ++c) {
        m.binding.cell_node.push_back(
            node_of.at(m.community.cell_load_nodes[c]));
        m.binding.cell_pop.push_back(m.community.cells[c].population);
    }
    for (const auto& r : m.community.retailers)
        m.binding.retailer_node.push_back(node_of.at(r.load_node));
    m.assignment = community::expected_assignment_matrix(m.community);

    // --- hazard ---------------------------------------------------------
    const auto& jhaz = field(root, "hazard", origin);
    const auto& jev = field(jhaz, "event", "hazard");
    m.event.magnitude = number(jev, "magnitude", "hazard.event");
    const auto [ex, ey] = point(field(jev, "epicenter", "hazard.event"),
                                "hazard.event.epicenter");
    m.event.epi_x = ex;
    m.event.epi_y = ey;
    m.event.depth_km = number(jev, "depth_km", "hazard.event");
    m.event.validate();

    const auto& jat = field(jhaz, "attenuation", "hazard");
    m.attenuation.beta0 = number(jat, "beta0", "hazard.attenuation");
    m.attenuation.beta1 = number(jat, "beta1", "hazard.attenuation");
    m.attenuation.beta2 = number(jat, "beta2", "hazard.attenuation");
    m.attenuation.c_near_km = number(jat, "c_near_km", "hazard.attenuation");
    m.attenuation.sigma_inter = number(jat, "sigma_inter", "hazard.attenuation");
    m.attenuation.sigma_intra = number(jat, "sigma_intra", "hazard.attenuation");
    m.attenuation.validate();

    // --- fragility / restoration ----------------------------------------
    const auto& jfrag = field(root, "fragility", origin);
    std::map<std::string, int> class_index;
    for (const auto& [cls, jf] : jfrag.items()) {
        epn::component_class_from_string(cls);  // rejects unknown classes
        fragility::FragilitySet fs;
        fs.component_class = cls;
        fs.medians_g = quad(jf, "medians_g", "fragility." + cls);
        fs.betas = quad(jf, "betas", "fragility." + cls);
        fs.validate();
        fragility::RestorationTable rt;
        rt.component_class = cls;
        rt.days = quad(jf, "restoration_days", "fragility." + cls);
        rt.validate();
        class_index[cls] = static_cast<int>(m.fragility_sets.size());
        m.fragility_sets.push_back(std::move(fs));
        m.restoration_tables.push_back(std::move(rt));
    }
    for (const auto& c : m.network.components) {
        fragility::ComponentExposure e;
        e.damageable = c.damageable;
        const auto it = class_index.find(epn::to_string(c.cls));
        if (it == class_index.end()) {
            if (c.damageable)
                throw ConfigError("component " + c.id + ": no fragility entry for class " +
                                  epn::to_string(c.cls));
            e.class_index = -1;
        } else {
            e.class_index = it->second;
        }
        m.exposure.push_back(e);
        m.component_sites.emplace_back(c.site_x, c.site_y);
    }

    // --- recovery parameters ---------------------------------------------
    const auto& jrec = field(root, "recovery", origin);
    m.params.resource_units =
        field(jrec, "resource_units", "recovery").get<int>();
    if (m.params.resource_units < 1)
        throw ConfigError("recovery.resource_units must be >= 1");
    m.params.gamma = number(jrec, "gamma", "recovery");
    if (!(m.params.gamma > 0.0 && m.params.gamma <= 1.0))
        throw ConfigError("recovery.gamma must be in (0, 1]");
    m.params.benefit_mode = recovery::benefit_mode_from_string(
        field(jrec, "benefit_mode", "recovery").get<std::string>());
    m.params.action_budget = jrec.value("action_budget", std::uint64_t{50000});
    m.params.rollout_samples = jrec.value("rollout_samples", 30);
    if (m.params.rollout_samples < 1)
        throw ConfigError("recovery.rollout_samples must be >= 1");

    return m;
}

ScenarioModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str(), path);
}

}  // namespace epnrec::config
