#pragma once

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "seqpred/rational.hpp"
#include "seqpred/version.hpp"

namespace seqpred {

// Fixed-width deterministic float formatting for reports and CSVs.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

struct Quantity {
    std::string name;
    bool exact = false; // exact rationals keep both forms
    Rat value{0};
    double approx = 0.0;
};

struct Verdict {
    std::string name;
    bool pass = false;
    double margin = 0.0;              // distance to the failing side
    std::vector<std::string> from;    // names of the quantities used
};

// Structured experiment outcome. A report is a pure function of its
// parameter record, so serializations are byte-identical across runs.
struct Report {
    std::string name;
    std::vector<std::pair<std::string, std::string>> inputs;
    std::vector<Quantity> quantities;
    std::vector<Verdict> verdicts;
    std::vector<std::string> notes;

    void add_input(const std::string& key, const std::string& value) {
        inputs.emplace_back(key, value);
    }
    void add_quantity(const std::string& qname, const Rat& v) {
        quantities.push_back({qname, true, v, to_double(v)});
    }
    void add_quantity(const std::string& qname, double v) {
        quantities.push_back({qname, false, Rat(0), v});
    }
    // Every verdict must name the quantities it was computed from.
    void add_verdict(const std::string& vname, bool pass, double margin,
                     std::vector<std::string> from) {
        if (from.empty())
            throw std::invalid_argument("verdict must reference its quantities");
        verdicts.push_back({vname, pass, margin, std::move(from)});
    }

    bool all_passed() const {
        for (const Verdict& v : verdicts)
            if (!v.pass) return false;
        return true;
    }
};

inline std::string report_text(const Report& r) {
    std::ostringstream os;
    os << "# " << kToolName << " " << kToolVersion << " report\n";
    os << "report " << r.name << "\n";
    for (const auto& [k, v] : r.inputs) os << "param " << k << " = " << v << "\n";
    for (const Quantity& q : r.quantities) {
        os << "quantity " << q.name << " = ";
        if (q.exact)
            os << rat_string(q.value) << " (" << format_double(q.approx) << ")";
        else
            os << format_double(q.approx);
        os << "\n";
    }
    for (const Verdict& v : r.verdicts) {
        os << "verdict " << v.name << " = " << (v.pass ? "PASS" : "FAIL")
           << " margin=" << format_double(v.margin) << " from=";
        for (std::size_t i = 0; i < v.from.size(); ++i)
            os << (i ? "," : "") << v.from[i];
        os << "\n";
    }
    for (const std::string& n : r.notes) os << "note " << n << "\n";
    os << "result " << (r.all_passed() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

inline std::string report_csv(const Report& r) {
    std::ostringstream os;
    os << "# " << kToolName << " " << kToolVersion << " report=" << r.name << "\n";
    os << "kind,name,value,detail\n";
    for (const auto& [k, v] : r.inputs) os << "param," << k << "," << v << ",\n";
    for (const Quantity& q : r.quantities) {
        if (q.exact)
            os << "quantity," << q.name << "," << rat_string(q.value) << ","
               << format_double(q.approx) << "\n";
        else
            os << "quantity," << q.name << "," << format_double(q.approx) << ",\n";
    }
    for (const Verdict& v : r.verdicts) {
        os << "verdict," << v.name << "," << (v.pass ? "PASS" : "FAIL") << ","
           << format_double(v.margin) << "\n";
    }
    os << "result,all,," << (r.all_passed() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

} // namespace seqpred
