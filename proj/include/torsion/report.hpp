#pragma once

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

// Verification records and their CSV / JSON serialization.  Reports must be
// reproducible byte-for-byte given (config, seed), modulo the timestamp.

namespace torsion {

enum class RecordStatus { pass, fail, indeterminate, skipped };

inline const char* to_string(RecordStatus s) {
    switch (s) {
        case RecordStatus::pass: return "pass";
        case RecordStatus::fail: return "fail";
        case RecordStatus::indeterminate: return "indeterminate";
        case RecordStatus::skipped: return "skipped";
    }
    return "?";
}

inline RecordStatus record_status_from(const std::string& s) {
    if (s == "pass") return RecordStatus::pass;
    if (s == "fail") return RecordStatus::fail;
    if (s == "indeterminate") return RecordStatus::indeterminate;
    if (s == "skipped") return RecordStatus::skipped;
    throw std::invalid_argument("unknown record status: " + s);
}

// Three-state verdict: fail only when the margin is decisively negative.
inline RecordStatus classify_margin(double margin, double budget) {
    if (margin < -budget) return RecordStatus::fail;
    if (margin > budget) return RecordStatus::pass;
    return RecordStatus::indeterminate;
}

struct VerificationRecord {
    std::string domain_id;
    std::string family;
    int n_vertices = 0;
    double area = 0.0;
    double perimeter = 0.0;
    double inradius = 0.0;
    double sigma1 = 0.0;
    double sigma1_budget = 0.0;
    double alpha = 0.0;
    double tau_alpha = 0.0;
    double tau_alpha_budget = 0.0;
    double tau_ball = 0.0;
    double tau_dirichlet = 0.0;
    double lemma_margin = 0.0;
    double theorem_margin = 0.0;
    RecordStatus status = RecordStatus::indeterminate;
    std::string note;  // JSON only; carries skip reasons
};

struct RunMeta {
    std::uint64_t seed = 0;
    double mesh_h = 0.0;
    std::string version;
    std::string timestamp;
};

inline std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

inline constexpr const char* kCsvHeader =
    "domain_id,family,n_vertices,area,perimeter,inradius,sigma1,sigma1_budget,alpha,"
    "tau_alpha,tau_alpha_budget,tau_ball,tau_dirichlet,lemma_margin,theorem_margin,status";

inline void write_csv(const std::vector<VerificationRecord>& records, std::ostream& out) {
    if (records.empty()) throw std::invalid_argument("write_csv: no records");
    out << kCsvHeader << "\n";
    for (const auto& r : records) {
        out << r.domain_id << ',' << r.family << ',' << r.n_vertices << ','
            << detail::fmt_double(r.area) << ',' << detail::fmt_double(r.perimeter) << ','
            << detail::fmt_double(r.inradius) << ',' << detail::fmt_double(r.sigma1) << ','
            << detail::fmt_double(r.sigma1_budget) << ',' << detail::fmt_double(r.alpha) << ','
            << detail::fmt_double(r.tau_alpha) << ',' << detail::fmt_double(r.tau_alpha_budget)
            << ',' << detail::fmt_double(r.tau_ball) << ','
            << detail::fmt_double(r.tau_dirichlet) << ',' << detail::fmt_double(r.lemma_margin)
            << ',' << detail::fmt_double(r.theorem_margin) << ',' << to_string(r.status)
            << "\n";
    }
}

inline std::vector<VerificationRecord> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("read_csv: empty input");
    if (line != kCsvHeader) throw std::invalid_argument("read_csv: unexpected header: " + line);
    std::vector<VerificationRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 16)
            throw std::invalid_argument("read_csv: expected 16 fields, got " +
                                        std::to_string(f.size()));
        VerificationRecord r;
        r.domain_id = f[0];
        r.family = f[1];
        r.n_vertices = std::stoi(f[2]);
        r.area = std::stod(f[3]);
        r.perimeter = std::stod(f[4]);
        r.inradius = std::stod(f[5]);
        r.sigma1 = std::stod(f[6]);
        r.sigma1_budget = std::stod(f[7]);
        r.alpha = std::stod(f[8]);
        r.tau_alpha = std::stod(f[9]);
        r.tau_alpha_budget = std::stod(f[10]);
        r.tau_ball = std::stod(f[11]);
        r.tau_dirichlet = std::stod(f[12]);
        r.lemma_margin = std::stod(f[13]);
        r.theorem_margin = std::stod(f[14]);
        r.status = record_status_from(f[15]);
        records.push_back(std::move(r));
    }
    return records;
}

inline nlohmann::json record_to_json(const VerificationRecord& r) {
    return nlohmann::json{{"domain_id", r.domain_id},
                          {"family", r.family},
                          {"n_vertices", r.n_vertices},
                          {"area", r.area},
                          {"perimeter", r.perimeter},
                          {"inradius", r.inradius},
                          {"sigma1", r.sigma1},
                          {"sigma1_budget", r.sigma1_budget},
                          {"alpha", r.alpha},
                          {"tau_alpha", r.tau_alpha},
                          {"tau_alpha_budget", r.tau_alpha_budget},
                          {"tau_ball", r.tau_ball},
                          {"tau_dirichlet", r.tau_dirichlet},
                          {"lemma_margin", r.lemma_margin},
                          {"theorem_margin", r.theorem_margin},
                          {"status", to_string(r.status)},
                          {"note", r.note}};
}

inline VerificationRecord record_from_json(const nlohmann::json& j) {
    VerificationRecord r;
    r.domain_id = j.at("domain_id").get<std::string>();
    r.family = j.at("family").get<std::string>();
    r.n_vertices = j.at("n_vertices").get<int>();
    r.area = j.at("area").get<double>();
    r.perimeter = j.at("perimeter").get<double>();
    r.inradius = j.at("inradius").get<double>();
    r.sigma1 = j.at("sigma1").get<double>();
    r.sigma1_budget = j.at("sigma1_budget").get<double>();
    r.alpha = j.at("alpha").get<double>();
    r.tau_alpha = j.at("tau_alpha").get<double>();
    r.tau_alpha_budget = j.at("tau_alpha_budget").get<double>();
    r.tau_ball = j.at("tau_ball").get<double>();
    r.tau_dirichlet = j.at("tau_dirichlet").get<double>();
    r.lemma_margin = j.at("lemma_margin").get<double>();
    r.theorem_margin = j.at("theorem_margin").get<double>();
    r.status = record_status_from(j.at("status").get<std::string>());
    r.note = j.value("note", "");
    return r;
}

inline void write_json(const std::vector<VerificationRecord>& records, const RunMeta& meta,
                       std::ostream& out) {
    if (records.empty()) throw std::invalid_argument("write_json: no records");
    nlohmann::json j;
    j["meta"] = {{"seed", meta.seed},
                 {"mesh_h", meta.mesh_h},
                 {"version", meta.version},
                 {"timestamp", meta.timestamp}};
    auto& arr = j["records"];
    arr = nlohmann::json::array();
    for (const auto& r : records) arr.push_back(record_to_json(r));
    out << j.dump(2) << '\n';
}

struct JsonReport {
    RunMeta meta;
    std::vector<VerificationRecord> records;
};

inline JsonReport read_json(std::istream& in) {
    nlohmann::json j;
    in >> j;
    JsonReport rep;
    if (j.contains("meta")) {
        rep.meta.seed = j["meta"].value("seed", std::uint64_t{0});
        rep.meta.mesh_h = j["meta"].value("mesh_h", 0.0);
        rep.meta.version = j["meta"].value("version", "");
        rep.meta.timestamp = j["meta"].value("timestamp", "");
    }
    for (const auto& rj : j.at("records")) rep.records.push_back(record_from_json(rj));
    return rep;
}

// Exit-code policy: 0 all pass, 1 any fail, 2 any indeterminate without
// fails, 3 configuration error (assigned by the CLI).
inline int exit_code_for(const std::vector<VerificationRecord>& records) {
    bool any_fail = false, any_indet = false;
    for (const auto& r : records) {
        if (r.status == RecordStatus::fail) any_fail = true;
        if (r.status == RecordStatus::indeterminate) any_indet = true;
    }
    if (any_fail) return 1;
    if (any_indet) return 2;
    return 0;
}

}  // namespace torsion
