#include <cmath>
#include <istream>
#include <map>
#include <sstream>

#include "hexaplan/error.hpp"
#include "hexaplan/ilp.hpp"

namespace hexaplan {

namespace {

constexpr int kTermsPerLine = 8;

void write_terms(std::ostringstream& out, const IlpModel& model, const std::vector<Term>& terms) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i > 0 && i % kTermsPerLine == 0) out << "\n   ";
        const long long c = terms[i].coef;
        const char* sign = c < 0 ? "-" : "+";
        const long long mag = c < 0 ? -c : c;
        if (i == 0 && c >= 0)
            out << ' ';
        else
            out << ' ' << sign << ' ';
        if (mag != 1) out << mag << ' ';
        out << model.var_name(terms[i].var);
    }
}

}  // namespace

std::string export_lp(const IlpModel& model) {
    std::ostringstream out;
    out << "\\ 0/1 feasibility model: " << model.num_vars << " variables, " << model.constraints.size()
        << " constraints\n";
    out << "Minimize\n obj:";
    if (model.num_vars > 0) out << " 0 " << model.var_name(0);
    out << "\nSubject To\n";
    for (std::size_t c = 0; c < model.constraints.size(); ++c) {
        const Constraint& k = model.constraints[c];
        out << " c" << c << ':';
        write_terms(out, model, k.terms);
        out << (k.rel == Relation::le ? " <= " : k.rel == Relation::eq ? " = " : " >= ") << k.rhs << '\n';
    }
    out << "Binary\n";
    for (int v = 0; v < model.num_vars; ++v) {
        out << ' ' << model.var_name(v);
        if ((v + 1) % kTermsPerLine == 0 || v + 1 == model.num_vars) out << '\n';
    }
    out << "End\n";
    return out.str();
}

std::optional<std::vector<std::uint8_t>> import_solution(const IlpModel& model, std::istream& in) {
    std::map<std::string, int> index;
    for (int v = 0; v < model.num_vars; ++v) index.emplace(model.var_name(v), v);
    std::vector<std::uint8_t> x(static_cast<std::size_t>(model.num_vars), 0);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string name;
        if (!(row >> name) || name[0] == '#') continue;
        if (name == "infeasible" || name == "INFEASIBLE") return std::nullopt;
        double value = 0.0;
        if (!(row >> value)) throw Error(ErrorKind::input, "solution line without a value: " + line);
        auto it = index.find(name);
        if (it == index.end()) throw Error(ErrorKind::input, "solution names unknown variable " + name);
        // Solvers report integers with some slack; anything else is not binary.
        if (std::abs(value - 1.0) <= 1e-6)
            x[static_cast<std::size_t>(it->second)] = 1;
        else if (std::abs(value) > 1e-6)
            throw Error(ErrorKind::input, "non-binary value for " + name + ": " + std::to_string(value));
    }
    return x;
}

}  // namespace hexaplan
