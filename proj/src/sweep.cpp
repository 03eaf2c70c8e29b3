#include "ccrp/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "ccrp/errors.hpp"

namespace ccrp {

namespace {

// Fixed-format doubles keep the CSV byte-deterministic.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

RunConfig apply_axis(const RunConfig& base, SweepAxis axis, double value) {
    RunConfig cfg = base;
    switch (axis) {
        case SweepAxis::LambdaP:
            cfg.lambda_p = value;
            break;
        case SweepAxis::LambdaE:
            cfg.lambda_e = value;
            break;
        case SweepAxis::MprStrength:
            cfg.table.mpr_pdp[0] = cfg.table.mpr_pdp[1] = value;
            cfg.table.mpr_sds[0] = cfg.table.mpr_sds[1] = value;
            cfg.table.mpr_sdp[0] = cfg.table.mpr_sdp[1] = value;
            break;
        case SweepAxis::PacketBits: {
            PhysicalConfig phys = *cfg.physical;
            phys.packet_bits = value;
            cfg.physical = phys;
            cfg.table = build_table(phys);
            break;
        }
    }
    return cfg;
}

std::vector<SweepRow> evaluate_point(const RunConfig& base, const SweepSpec& spec,
                                     double value) {
    const RunConfig cfg = apply_axis(base, spec.axis, value);
    std::vector<SweepRow> rows;
    rows.reserve(spec.systems.size());
    for (SystemId id : spec.systems) {
        SweepRow row;
        row.axis_value = value;
        row.system = id;
        switch (id) {
            case SystemId::S1:
                row.opt = optimize_s1(cfg.table, cfg.lambda_e, cfg.lambda_p, cfg.grid);
                break;
            case SystemId::S2:
                row.opt = optimize_s2(cfg.table, cfg.lambda_e, cfg.lambda_p, cfg.grid);
                break;
            case SystemId::S3:
                row.opt = optimize_s3(cfg.table, cfg.lambda_p, cfg.grid);
                break;
            case SystemId::Sc:
                row.opt = optimize_conventional(cfg.table, cfg.lambda_e, cfg.lambda_p,
                                                ConventionalBound::Outer, cfg.grid);
                break;
            case SystemId::Sim: {
                row.opt = optimize_s3(cfg.table, cfg.lambda_p, cfg.grid);
                if (row.opt.feasible)
                    row.sim = run(cfg.table, row.opt.best_policy, cfg.lambda_p, cfg.lambda_e,
                                  cfg.sim);
                break;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

SweepAxis axis_from_name(const std::string& name) {
    if (name == "lambda_p") return SweepAxis::LambdaP;
    if (name == "lambda_e") return SweepAxis::LambdaE;
    if (name == "X") return SweepAxis::MprStrength;
    if (name == "B") return SweepAxis::PacketBits;
    throw ConfigError("unknown sweep axis `" + name + "` (expected lambda_p, lambda_e, X or B)");
}

const char* axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::LambdaP: return "lambda_p";
        case SweepAxis::LambdaE: return "lambda_e";
        case SweepAxis::MprStrength: return "X";
        case SweepAxis::PacketBits: return "B";
    }
    return "?";
}

SystemId system_from_name(const std::string& name) {
    if (name == "S1") return SystemId::S1;
    if (name == "S2") return SystemId::S2;
    if (name == "S3") return SystemId::S3;
    if (name == "Sc") return SystemId::Sc;
    if (name == "SIM") return SystemId::Sim;
    throw ConfigError("unknown system `" + name + "` (expected S1, S2, S3, Sc or SIM)");
}

const char* system_name(SystemId id) {
    switch (id) {
        case SystemId::S1: return "S1";
        case SystemId::S2: return "S2";
        case SystemId::S3: return "S3";
        case SystemId::Sc: return "Sc";
        case SystemId::Sim: return "SIM";
    }
    return "?";
}

void SweepSpec::validate(const RunConfig& cfg) const {
    if (!(step > 0.0)) throw ConfigError("sweep: step must be > 0");
    if (systems.empty()) throw ConfigError("sweep: at least one system required");
    const bool empty_range = from > to;
    if (axis != SweepAxis::PacketBits) {
        if (!empty_range && (from < 0.0 || to > 1.0 + 1e-12))
            throw ConfigError(std::string("sweep: ") + axis_name(axis) +
                              " range must lie within [0,1]");
    } else {
        if (!cfg.physical)
            throw ConfigError("sweep: axis B requires a physical channel configuration");
        if (!empty_range && from <= 0.0)
            throw ConfigError("sweep: packet-size range must be positive");
    }
}

std::vector<double> SweepSpec::values() const {
    std::vector<double> vs;
    if (from > to) return vs;
    const auto count =
        static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
    vs.reserve(count);
    for (std::size_t k = 0; k < count; ++k) vs.push_back(from + static_cast<double>(k) * step);
    return vs;
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg, const SweepSpec& spec) {
    spec.validate(cfg);
    const std::vector<double> values = spec.values();

    // Fan points out to a small worker pool; results land in a slot per
    // point, so completion order never shows in the output.
    std::vector<std::vector<SweepRow>> results(values.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= values.size()) return;
            try {
                results[k] = evaluate_point(cfg, spec, values[k]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned pool =
        std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                           static_cast<unsigned>(std::max<std::size_t>(values.size(), 1)));
    if (pool <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(pool);
        for (unsigned i = 0; i < pool; ++i) threads.emplace_back(worker);
        for (std::thread& th : threads) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<SweepRow> rows;
    for (std::vector<SweepRow>& group : results)
        for (SweepRow& row : group) rows.push_back(std::move(row));
    return rows;
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "axis_value,system,mu_s_star,feasible,beta,f,alpha,omega,gamma,"
          "mu_p,lambda_r,mu_r,pi_p,pi_r,nu0,sim_mu_s,sim_ci\n";
    for (const SweepRow& row : rows) {
        const OptimizationResult& o = row.opt;
        os << fmt(row.axis_value) << ',' << csv_field(system_name(row.system)) << ','
           << fmt(o.objective) << ',' << (o.feasible ? "true" : "false") << ','
           << fmt(o.best_policy.admit_prob) << ',' << fmt(o.best_policy.receive_prob) << ','
           << fmt(o.best_policy.depleted_receive_prob) << ','
           << fmt(o.best_policy.resume_prob) << ',' << fmt(o.best_policy.relay_select_prob)
           << ',' << fmt(o.best_rates.primary_service) << ','
           << fmt(o.best_rates.relay_arrival) << ',' << fmt(o.best_rates.relay_service) << ','
           << fmt(o.best_rates.primary_busy) << ',' << fmt(o.best_rates.relay_busy) << ','
           << fmt(o.best_rates.energy_empty) << ',';
        if (row.sim) {
            os << fmt(row.sim->mu_s.mean) << ',' << fmt(row.sim->mu_s.ci);
        } else {
            os << ',';
        }
        os << '\n';
    }
}

} // namespace ccrp
