#include "iotsynth/journal.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace iotsynth {

namespace {

bool ip_in(const std::vector<Ipv4>& set, Ipv4 ip) {
    return std::find(set.begin(), set.end(), ip) != set.end();
}

bool ip_in_ranges(const std::vector<AddrRange>& ranges, Ipv4 ip) {
    for (const auto& r : ranges)
        if (r.contains(ip)) return true;
    return false;
}

// "a,b,c" -> items; empty string -> empty list
std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t sep = s.find(',', start);
        if (sep == std::string::npos) {
            if (start < s.size()) out.push_back(s.substr(start));
            break;
        }
        if (sep > start) out.push_back(s.substr(start, sep - start));
        start = sep + 1;
    }
    return out;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

bool JournalEntry::covers_endpoints(Ipv4 a_ip, u16 a_port, Ipv4 b_ip, u16 b_port) const {
    // Unordered endpoint match: either orientation of (src set, dst ranges).
    bool fwd = ip_in(src, a_ip) && ip_in_ranges(dst, b_ip);
    bool rev = ip_in(src, b_ip) && ip_in_ranges(dst, a_ip);
    if (!fwd && !rev) return false;
    if (ports.empty()) return true;
    for (u16 p : ports)
        if (a_port == p || b_port == p) return true;
    return false;
}

bool JournalEntry::covers(u64 t_us, Ipv4 a_ip, u16 a_port, Ipv4 b_ip, u16 b_port,
                          wire::L4Proto l4) const {
    if (t_us < t_start_us || t_us > t_end_us) return false;
    if (l4 != proto) return false;
    return covers_endpoints(a_ip, a_port, b_ip, b_port);
}

std::string GroundTruthJournal::to_text() const {
    std::ostringstream out;
    out << "# ground-truth journal v1\n";
    out << "seed " << seed << "\n";
    out << "duration_us " << duration_us << "\n";
    std::string parts;
    for (std::size_t i = 0; i < ddos_participants.size(); ++i) {
        if (i) parts += ',';
        parts += to_string(ddos_participants[i]);
    }
    out << "ddos_participants " << parts << "\n";
    for (const auto& e : entries) {
        out << "entry label=" << to_string(e.label) << " start_us=" << e.t_start_us
            << " end_us=" << e.t_end_us << " src=";
        for (std::size_t i = 0; i < e.src.size(); ++i) {
            if (i) out << ',';
            out << to_string(e.src[i]);
        }
        out << " dst=";
        for (std::size_t i = 0; i < e.dst.size(); ++i) {
            if (i) out << ',';
            out << to_string(e.dst[i]);
        }
        out << " ports=";
        for (std::size_t i = 0; i < e.ports.size(); ++i) {
            if (i) out << ',';
            out << e.ports[i];
        }
        out << " proto=" << wire::to_string(e.proto);
        out << " scope=" << quote(e.scope);
        out << " note=" << quote(e.note) << "\n";
    }
    return out.str();
}

namespace {

// Splits an entry line into key=value tokens; quoted values may hold spaces.
std::vector<std::pair<std::string, std::string>> tokenize_entry(const std::string& line) {
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        if (i >= line.size()) break;
        std::size_t eq = line.find('=', i);
        if (eq == std::string::npos) throw IoError("journal: expected key=value in: " + line);
        std::string key = line.substr(i, eq - i);
        std::string value;
        i = eq + 1;
        if (i < line.size() && line[i] == '"') {
            ++i;
            while (i < line.size() && line[i] != '"') {
                if (line[i] == '\\' && i + 1 < line.size()) ++i;
                value += line[i++];
            }
            if (i >= line.size()) throw IoError("journal: unterminated quote in: " + line);
            ++i;
        } else {
            std::size_t sp = line.find(' ', i);
            value = line.substr(i, sp == std::string::npos ? std::string::npos : sp - i);
            i = sp == std::string::npos ? line.size() : sp;
        }
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

}  // namespace

GroundTruthJournal GroundTruthJournal::from_text(const std::string& text) {
    GroundTruthJournal j;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head == "seed") {
            ls >> j.seed;
        } else if (head == "duration_us") {
            ls >> j.duration_us;
        } else if (head == "ddos_participants") {
            std::string rest;
            ls >> rest;
            for (const auto& ip : split_commas(rest)) j.ddos_participants.push_back(parse_ipv4(ip));
        } else if (head == "entry") {
            JournalEntry e;
            for (auto& [k, v] : tokenize_entry(line.substr(6))) {
                if (k == "label") {
                    auto l = parse_label(v);
                    if (!l) throw IoError("journal: unknown label " + v);
                    e.label = *l;
                } else if (k == "start_us") {
                    e.t_start_us = std::stoull(v);
                } else if (k == "end_us") {
                    e.t_end_us = std::stoull(v);
                } else if (k == "src") {
                    for (const auto& ip : split_commas(v)) e.src.push_back(parse_ipv4(ip));
                } else if (k == "dst") {
                    for (const auto& r : split_commas(v)) e.dst.push_back(parse_addr_range(r));
                } else if (k == "ports") {
                    for (const auto& p : split_commas(v)) e.ports.push_back(u16(std::stoul(p)));
                } else if (k == "proto") {
                    if (v == "tcp") e.proto = wire::L4Proto::tcp;
                    else if (v == "udp") e.proto = wire::L4Proto::udp;
                    else if (v == "icmp") e.proto = wire::L4Proto::icmp;
                    else if (v == "arp") e.proto = wire::L4Proto::arp;
                    else throw IoError("journal: unknown proto " + v);
                } else if (k == "scope") {
                    e.scope = v;
                } else if (k == "note") {
                    e.note = v;
                } else {
                    throw IoError("journal: unknown entry key " + k);
                }
            }
            j.entries.push_back(std::move(e));
        } else {
            throw IoError("journal: unknown line: " + line);
        }
    }
    return j;
}

GroundTruthJournal GroundTruthJournal::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open journal: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str());
}

void GroundTruthJournal::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write journal: " + path);
    out << to_text();
    if (!out) throw IoError("error writing journal: " + path);
}

}  // namespace iotsynth
