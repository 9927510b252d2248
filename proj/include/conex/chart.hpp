/**
 * Coordinate charts.  A chart is an ordered list of named variables, each
 * either cartesian, radial (the cone coordinate t) or an angle.
 */

#ifndef CONEX_CHART_HPP
#define CONEX_CHART_HPP

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace conex {

enum class VariableKind
{
    cartesian,
    radial,
    angle
};

struct Variable
{
    std::string name;
    VariableKind kind = VariableKind::cartesian;

    friend bool operator==(const Variable&, const Variable&) = default;
};

class Chart
{
    public:
        Chart(std::string name, std::vector<Variable> variables)
            : name_(std::move(name)), variables_(std::move(variables))
        {
            if (variables_.empty())
                throw std::invalid_argument("chart '" + name_ + "' has no variables");
            if (variables_.size() > 30)
                throw std::invalid_argument("chart '" + name_ + "' exceeds 30 variables");
            std::set<std::string> seen;
            int radial = 0;
            for (const auto& v : variables_)
            {
                if (!seen.insert(v.name).second)
                    throw std::invalid_argument("duplicate variable '" + v.name + "' in chart '" + name_ + "'");
                if (v.kind == VariableKind::radial)
                    ++radial;
            }
            if (radial > 1)
                throw std::invalid_argument("chart '" + name_ + "' has more than one radial variable");
        }

        const std::string& name() const { return name_; }
        const std::vector<Variable>& variables() const { return variables_; }
        std::size_t dimension() const { return variables_.size(); }
        const Variable& variable(std::size_t i) const { return variables_.at(i); }
        bool is_angle(std::size_t i) const { return variables_.at(i).kind == VariableKind::angle; }

        std::size_t index_of(const std::string& var) const
        {
            for (std::size_t i = 0; i < variables_.size(); ++i)
            {
                if (variables_[i].name == var)
                    return i;
            }
            throw std::out_of_range("no variable '" + var + "' in chart '" + name_ + "'");
        }

        /** Index of the radial variable, or dimension() if there is none. */
        std::size_t radial_index() const
        {
            for (std::size_t i = 0; i < variables_.size(); ++i)
            {
                if (variables_[i].kind == VariableKind::radial)
                    return i;
            }
            return variables_.size();
        }

        bool has_angles() const
        {
            for (const auto& v : variables_)
            {
                if (v.kind == VariableKind::angle)
                    return true;
            }
            return false;
        }

        friend bool operator==(const Chart& a, const Chart& b)
        {
            return a.name_ == b.name_ && a.variables_ == b.variables_;
        }

    private:
        std::string name_;
        std::vector<Variable> variables_;
};

using ChartPtr = std::shared_ptr<const Chart>;

inline ChartPtr make_chart(std::string name, std::vector<Variable> variables)
{
    return std::make_shared<const Chart>(std::move(name), std::move(variables));
}

inline bool same_chart(const ChartPtr& a, const ChartPtr& b)
{
    return a == b || (a && b && *a == *b);
}

inline void require_same_chart(const ChartPtr& a, const ChartPtr& b, const char* op)
{
    if (!same_chart(a, b))
        throw std::invalid_argument(std::string(op) + ": chart mismatch ('" + (a ? a->name() : "null")
                                    + "' vs '" + (b ? b->name() : "null") + "')");
}

/** Cartesian chart x1, y1, ..., xn, yn (symplectic pairs interleaved). */
inline ChartPtr symplectic_cartesian_chart(int n)
{
    if (n < 1)
        throw std::invalid_argument("symplectic chart needs n >= 1");
    std::vector<Variable> vars;
    for (int i = 1; i <= n; ++i)
    {
        vars.push_back({"x" + std::to_string(i), VariableKind::cartesian});
        vars.push_back({"y" + std::to_string(i), VariableKind::cartesian});
    }
    return make_chart("r" + std::to_string(2 * n), std::move(vars));
}

/** The cone chart (t, angles...) over a link chart made of angle variables. */
inline ChartPtr cone_chart_over(const Chart& link_chart)
{
    std::vector<Variable> vars;
    vars.push_back({"t", VariableKind::radial});
    for (const auto& v : link_chart.variables())
        vars.push_back(v);
    return make_chart("c" + link_chart.name(), std::move(vars));
}

}   // namespace conex

#endif
