#include "dcsim/sweep.h"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "dcsim/simulation.h"

namespace dcsim {

grid_axis parse_grid_axis(std::string_view text)
{
    const auto eq = text.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw config_error("grid axis must be section.key=v1,v2,...; got '" + std::string(text) + "'");
    grid_axis axis;
    axis.key = std::string(text.substr(0, eq));
    if (!run_config::known_key(axis.key))
        throw config_error("unknown config key '" + axis.key + "' in grid");
    if (axis.key == "run.trace" || axis.key == "run.gen")
        throw config_error("the trace cannot be a sweep axis");
    std::string_view rest = text.substr(eq + 1);
    for (;;) {
        const auto comma = rest.find(',');
        axis.values.emplace_back(rest.substr(0, comma));
        if (comma == std::string_view::npos)
            break;
        rest = rest.substr(comma + 1);
    }
    return axis;
}

std::vector<grid_point> expand_grid(std::span<const grid_axis> axes)
{
    std::vector<grid_point> points{grid_point{}};
    for (const auto& axis : axes) {
        std::vector<grid_point> next;
        next.reserve(points.size() * axis.values.size());
        for (const auto& p : points)
            for (const auto& v : axis.values) {
                grid_point q = p;
                q.emplace_back(axis.key, v);
                next.push_back(std::move(q));
            }
        points = std::move(next);
    }
    return points;
}

namespace {

std::string point_label(const std::string& prefix, const grid_point& p)
{
    std::string s = prefix;
    for (const auto& [k, v] : p) {
        if (!s.empty())
            s += ',';
        s += k + "=" + v;
    }
    return s;
}

} // namespace

std::vector<nlohmann::ordered_json> run_sweep(const run_config& base, std::span<const grid_axis> axes,
                                              std::span<const access_record> trace, const std::string& trace_name,
                                              const sweep_options& options)
{
    const std::vector<grid_point> points = expand_grid(axes);
    std::vector<run_config> configs;
    for (const auto& p : points) {
        run_config c = base;
        for (const auto& [k, v] : p)
            c.set(k, v);
        // Construct once up front so bad points fail before any work starts.
        make_policy(c);
        configs.push_back(std::move(c));
    }

    std::vector<nlohmann::ordered_json> reports(points.size());
    auto run_point = [&](std::size_t i) {
        reports[i] = run_records(configs[i], trace, point_label(options.label_prefix, points[i]), trace_name);
        if (!options.baseline_policy.empty()) {
            run_config b = configs[i];
            b.set("policy.name", options.baseline_policy);
            b.set("policy.dwp", "false");
            b.set("run.analyzers", "");
            add_normalized(reports[i], run_records(b, trace, options.baseline_policy, trace_name));
        }
    };

    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(points.size())));
    if (jobs == 1) {
        for (std::size_t i = 0; i < points.size(); ++i)
            run_point(i);
        return reports;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < jobs; ++t)
        workers.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < points.size();) {
                try {
                    run_point(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        });
    for (auto& w : workers)
        w.join();
    if (failure)
        std::rethrow_exception(failure);
    return reports;
}

} // namespace dcsim
