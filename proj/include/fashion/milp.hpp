#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fashion {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct MilpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MalformedProblem : MilpError {
    using MilpError::MilpError;
};
struct UnboundedProblem : MilpError {
    using MilpError::MilpError;
};

enum class ColKind { Binary, Continuous };
enum class RowSense { LE, EQ, GE };

struct Column {
    std::string name;
    ColKind kind = ColKind::Continuous;
    double lower = 0.0;
    double upper = kInfinity;
    double objective = 0.0;
    int branch_priority = 0; // higher classes branch first
};

struct Row {
    std::string name;
    RowSense sense = RowSense::LE;
    double rhs = 0.0;
    std::vector<std::pair<int, double>> coeffs; // (column, coefficient), sorted unique
};

// Minimization problem over binary and continuous columns.
struct MilpProblem {
    std::vector<Column> cols;
    std::vector<Row> rows;
    double objective_offset = 0.0;

    int add_column(std::string name, ColKind kind, double lower, double upper,
                   double objective) {
        cols.push_back({std::move(name), kind, lower, upper, objective});
        return static_cast<int>(cols.size()) - 1;
    }
    int add_binary(std::string name, double objective = 0.0) {
        return add_column(std::move(name), ColKind::Binary, 0.0, 1.0, objective);
    }
    int add_row(std::string name, RowSense sense, double rhs,
                std::vector<std::pair<int, double>> coeffs) {
        std::sort(coeffs.begin(), coeffs.end());
        // merge duplicate columns
        std::vector<std::pair<int, double>> merged;
        for (auto& [c, a] : coeffs) {
            if (!merged.empty() && merged.back().first == c) merged.back().second += a;
            else merged.emplace_back(c, a);
        }
        std::erase_if(merged, [](const auto& e) { return e.second == 0.0; });
        rows.push_back({std::move(name), sense, rhs, std::move(merged)});
        return static_cast<int>(rows.size()) - 1;
    }

    void fix_column(int col, double value) {
        cols[static_cast<std::size_t>(col)].lower = value;
        cols[static_cast<std::size_t>(col)].upper = value;
    }

    void validate() const {
        const int n = static_cast<int>(cols.size());
        for (const Column& c : cols) {
            if (std::isnan(c.lower) || std::isnan(c.upper) || std::isnan(c.objective))
                throw MalformedProblem("column " + c.name + " has NaN data");
            if (c.kind == ColKind::Binary &&
                (c.lower < 0.0 || c.upper > 1.0 || c.lower > c.upper))
                throw MalformedProblem("binary column " + c.name + " bounds outside [0,1]");
        }
        for (const Row& r : rows) {
            if (std::isnan(r.rhs)) throw MalformedProblem("row " + r.name + " has NaN rhs");
            int prev = -1;
            for (auto [c, a] : r.coeffs) {
                if (c < 0 || c >= n)
                    throw MalformedProblem("row " + r.name + " references unknown column");
                if (c <= prev) throw MalformedProblem("row " + r.name + " coefficients unsorted");
                if (std::isnan(a) || std::isinf(a))
                    throw MalformedProblem("row " + r.name + " has bad coefficient");
                prev = c;
            }
        }
    }

    double objective_value(const std::vector<double>& x) const {
        double v = objective_offset;
        for (std::size_t j = 0; j < cols.size(); ++j) v += cols[j].objective * x[j];
        return v;
    }

    // Row activity violations for a candidate point, scaled by row magnitude.
    double max_violation(const std::vector<double>& x) const {
        double worst = 0.0;
        for (const Row& r : rows) {
            double act = 0.0, scale = 1.0;
            for (auto [c, a] : r.coeffs) {
                act += a * x[static_cast<std::size_t>(c)];
                scale = std::max(scale, std::abs(a));
            }
            scale = std::max(scale, std::abs(r.rhs));
            double viol = 0.0;
            if (r.sense == RowSense::LE) viol = act - r.rhs;
            else if (r.sense == RowSense::GE) viol = r.rhs - act;
            else viol = std::abs(act - r.rhs);
            worst = std::max(worst, viol / scale);
        }
        return worst;
    }
};

enum class SolveStatus { Optimal, Infeasible, GapLimit, TimeLimit };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::GapLimit: return "gap-limit";
        case SolveStatus::TimeLimit: return "time-limit";
    }
    return "unknown";
}

struct MilpSolution {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<double> x;
    double objective = 0.0; // incumbent value (minimization)
    double bound = -kInfinity; // proven lower bound
    long nodes = 0;
};

struct SolveLimits {
    double time_s = 600.0;
    double gap = 1e-4;
    long node_cap = 1000000;
};

} // namespace fashion
