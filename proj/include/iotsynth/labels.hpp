#pragma once

#include <array>
#include <optional>
#include <string>

namespace iotsynth {

// Fixed class taxonomy used for ground truth, packet labels, and flow labels.
enum class Label {
    normal = 0,
    cve_exploitation,
    reverse_shell,
    scan_ports,
    credentials_bruteforce,
    transfer_payload_to_iot,
    mqttsa_slowite,
};

constexpr int kLabelCount = 7;

const std::string& to_string(Label l);
std::optional<Label> parse_label(const std::string& s);

const std::array<Label, kLabelCount>& all_labels();

}  // namespace iotsynth
