#pragma once

#include <string>
#include <vector>

#include "iotsynth/common.hpp"
#include "iotsynth/labels.hpp"
#include "iotsynth/net.hpp"
#include "iotsynth/wire.hpp"

namespace iotsynth {

// One attack-step window: everything the labeler may use. `scope` restricts
// an entry to one capture (multi-trace datasets); empty means all captures.
struct JournalEntry {
    Label label = Label::normal;
    u64 t_start_us = 0;
    u64 t_end_us = 0;
    std::vector<Ipv4> src;
    std::vector<AddrRange> dst;
    std::vector<u16> ports;  // matches either endpoint's port; empty = any
    wire::L4Proto proto = wire::L4Proto::tcp;
    std::string scope;
    std::string note;

    bool covers_endpoints(Ipv4 a_ip, u16 a_port, Ipv4 b_ip, u16 b_port) const;
    bool covers(u64 t_us, Ipv4 a_ip, u16 a_port, Ipv4 b_ip, u16 b_port,
                wire::L4Proto l4) const;
};

// Machine-readable record of what the simulator actually did; the labeling
// oracle and part of the shipped dataset.
struct GroundTruthJournal {
    u64 seed = 0;
    u64 duration_us = 0;
    std::vector<JournalEntry> entries;
    std::vector<Ipv4> ddos_participants;

    std::string to_text() const;
    static GroundTruthJournal from_text(const std::string& text);
    static GroundTruthJournal from_file(const std::string& path);
    void write_file(const std::string& path) const;
};

}  // namespace iotsynth
