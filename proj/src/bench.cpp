#include "fmdiag/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "fmdiag/debug.hpp"
#include "fmdiag/encode.hpp"
#include "fmdiag/error.hpp"
#include "fmdiag/synth.hpp"

namespace fmdiag {

double BenchCell::mean_ms() const {
    if (samples.empty()) return std::numeric_limits<double>::quiet_NaN();
    double sum = 0.0;
    for (const auto& s : samples) sum += s.diagnosis_ms;
    return sum / static_cast<double>(samples.size());
}

const BenchCell& BenchReport::cell(std::size_t t_pi, std::size_t cf) const {
    for (const auto& c : cells)
        if (c.t_pi == t_pi && c.cf == cf) return c;
    throw Error("bench report has no cell (" + std::to_string(t_pi) + ", " + std::to_string(cf) + ")");
}

std::uint64_t cell_seed(std::uint64_t seed, std::size_t t_pi, std::size_t cf, std::size_t rep) {
    return derive_seed(seed, {t_pi, cf, rep});
}

namespace {

BenchSample run_sample(std::size_t t_pi, std::size_t cf, std::size_t rep, const BenchConfig& config) {
    SynthParams p;
    p.num_constraints = cf;
    p.num_tests = t_pi;
    p.inconsistency_share = config.inconsistency_share;
    p.seed = cell_seed(config.seed, t_pi, cf, rep);
    const FeatureModel model = synth_model(p);
    const std::vector<TestCase> tests = synth_tests(model, p);
    const ConstraintSet cs = encode(model);

    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    const DebugSession session = preprocess(cs, tests, {});
    const DiagnosisResult result = diagnose(session, {.trace = false, .validate = false});
    const auto stop = Clock::now();

    validate_diagnosis(session, result.delta);

    BenchSample s;
    s.t_pi = t_pi;
    s.cf = cf;
    s.rep = rep;
    s.seed = p.seed;
    s.diagnosis_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    s.solver_calls = result.counters.solver_calls;
    s.nodes = result.counters.nodes;
    s.delta_size = result.delta.size();
    return s;
}

}  // namespace

BenchReport run_bench(const BenchConfig& config) {
    if (config.reps < 1) throw Error("bench: reps must be at least 1");
    for (auto v : config.rows)
        if (v < 1) throw Error("bench: |T_pi| values must be at least 1");
    for (auto v : config.cols)
        if (v < 2) throw Error("bench: |CF| values must be at least 2");

    BenchReport report;
    report.rows = config.rows;
    report.cols = config.cols;
    report.reps = config.reps;
    for (auto r : config.rows)
        for (auto c : config.cols) report.cells.push_back({r, c, {}, std::nullopt});

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= report.cells.size()) return;
            BenchCell& cell = report.cells[i];
            try {
                for (std::size_t rep = 0; rep < config.reps; ++rep)
                    cell.samples.push_back(run_sample(cell.t_pi, cell.cf, rep, config));
            } catch (const std::exception& e) {
                cell.samples.clear();
                cell.error = e.what();
            }
        }
    };
    const std::size_t jobs = std::max<std::size_t>(1, config.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::ostringstream env;
    env << "jobs=" << jobs << " hardware_threads=" << std::thread::hardware_concurrency()
        << " solver=dpll seed=" << config.seed;
    report.environment = env.str();
    return report;
}

std::string BenchReport::to_csv() const {
    std::ostringstream out;
    out << "t_pi,cf,rep,seed,diagnosis_ms,solver_calls,nodes,delta_size\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& c : cells) {
        for (const auto& s : c.samples) {
            out << s.t_pi << ',' << s.cf << ',' << s.rep << ',' << s.seed << ',' << s.diagnosis_ms << ','
                << s.solver_calls << ',' << s.nodes << ',' << s.delta_size << '\n';
        }
    }
    return out.str();
}

namespace {

template <typename T>
T parse_field(std::string_view text, std::size_t line) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ParseError(line, 0, "bad CSV field '" + std::string(text) + "'");
    return value;
}

double parse_double(std::string_view text, std::size_t line) {
    // std::from_chars for double is not available on every toolchain we target.
    std::string s(text);
    std::istringstream in(s);
    in.imbue(std::locale::classic());
    double v = 0.0;
    in >> v;
    if (!in || in.peek() != std::char_traits<char>::eof())
        throw ParseError(line, 0, "bad CSV field '" + s + "'");
    return v;
}

}  // namespace

BenchReport BenchReport::from_csv(std::string_view csv) {
    BenchReport report;
    std::map<std::pair<std::size_t, std::size_t>, BenchCell> cells;
    std::vector<std::size_t> rows, cols;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < csv.size()) {
        std::size_t end = csv.find('\n', start);
        if (end == std::string_view::npos) end = csv.size();
        std::string_view line = csv.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (line_no == 1) {
            if (line != "t_pi,cf,rep,seed,diagnosis_ms,solver_calls,nodes,delta_size")
                throw ParseError(1, 0, "unexpected CSV header");
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string_view> f;
        std::size_t s = 0;
        while (true) {
            const std::size_t comma = line.find(',', s);
            f.push_back(line.substr(s, comma == std::string_view::npos ? std::string_view::npos : comma - s));
            if (comma == std::string_view::npos) break;
            s = comma + 1;
        }
        if (f.size() != 8) throw ParseError(line_no, 0, "expected 8 CSV fields");
        BenchSample b;
        b.t_pi = parse_field<std::size_t>(f[0], line_no);
        b.cf = parse_field<std::size_t>(f[1], line_no);
        b.rep = parse_field<std::size_t>(f[2], line_no);
        b.seed = parse_field<std::uint64_t>(f[3], line_no);
        b.diagnosis_ms = parse_double(f[4], line_no);
        b.solver_calls = parse_field<std::uint64_t>(f[5], line_no);
        b.nodes = parse_field<std::uint64_t>(f[6], line_no);
        b.delta_size = parse_field<std::size_t>(f[7], line_no);
        if (std::find(rows.begin(), rows.end(), b.t_pi) == rows.end()) rows.push_back(b.t_pi);
        if (std::find(cols.begin(), cols.end(), b.cf) == cols.end()) cols.push_back(b.cf);
        auto& cell = cells[{b.t_pi, b.cf}];
        cell.t_pi = b.t_pi;
        cell.cf = b.cf;
        cell.samples.push_back(b);
        report.reps = std::max(report.reps, b.rep + 1);
    }
    report.rows = rows;
    report.cols = cols;
    for (auto r : rows) {
        for (auto c : cols) {
            auto it = cells.find({r, c});
            if (it != cells.end()) {
                report.cells.push_back(std::move(it->second));
            } else {
                report.cells.push_back({r, c, {}, std::string("no samples")});
            }
        }
    }
    return report;
}

std::string BenchReport::to_table() const {
    std::ostringstream out;
    out << std::fixed << std::setprecision(1);
    out << std::setw(8) << "|T_pi|";
    for (auto c : cols) out << std::setw(12) << c;
    out << '\n';
    for (auto r : rows) {
        out << std::setw(8) << r;
        for (auto c : cols) {
            const BenchCell& cell = this->cell(r, c);
            if (cell.error) {
                out << std::setw(12) << "failed";
            } else {
                out << std::setw(12) << cell.mean_ms();
            }
        }
        out << '\n';
    }
    out << "(mean diagnosis ms over " << reps << " repetitions; columns are |CF|)\n";
    if (!environment.empty()) out << "# " << environment << '\n';
    return out.str();
}

std::vector<std::string> monotone_growth_violations(const BenchReport& report, double slack) {
    std::vector<std::string> out;
    if (report.rows.empty() || report.cols.empty()) return out;
    const auto [rmin, rmax] = std::minmax_element(report.rows.begin(), report.rows.end());
    const auto [cmin, cmax] = std::minmax_element(report.cols.begin(), report.cols.end());
    auto check = [&](std::size_t r_small, std::size_t c_small, std::size_t r_big, std::size_t c_big) {
        const BenchCell& small = report.cell(r_small, c_small);
        const BenchCell& big = report.cell(r_big, c_big);
        std::ostringstream msg;
        if (small.error || big.error) {
            msg << "cell (" << (small.error ? r_small : r_big) << ", " << (small.error ? c_small : c_big)
                << ") failed";
            out.push_back(msg.str());
            return;
        }
        if (big.mean_ms() * slack < small.mean_ms()) {
            msg << "cell (" << r_big << ", " << c_big << ") = " << big.mean_ms() << " ms is more than " << slack
                << "x faster than cell (" << r_small << ", " << c_small << ") = " << small.mean_ms() << " ms";
            out.push_back(msg.str());
        }
    };
    for (auto c : report.cols)
        if (*rmin != *rmax) check(*rmin, c, *rmax, c);
    for (auto r : report.rows)
        if (*cmin != *cmax) check(r, *cmin, r, *cmax);
    return out;
}

}  // namespace fmdiag
