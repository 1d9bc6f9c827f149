#include "iotsynth/labels.hpp"

namespace iotsynth {

namespace {
const std::array<std::string, kLabelCount> kNames = {
    "normal",           "cve_exploitation",       "reverse_shell",  "scan_ports",
    "credentials_bruteforce", "transfer_payload_to_iot", "mqttsa_slowite",
};
}

const std::string& to_string(Label l) { return kNames[static_cast<int>(l)]; }

std::optional<Label> parse_label(const std::string& s) {
    for (int i = 0; i < kLabelCount; ++i)
        if (kNames[i] == s) return static_cast<Label>(i);
    return std::nullopt;
}

const std::array<Label, kLabelCount>& all_labels() {
    static const std::array<Label, kLabelCount> a = {
        Label::normal,
        Label::cve_exploitation,
        Label::reverse_shell,
        Label::scan_ports,
        Label::credentials_bruteforce,
        Label::transfer_payload_to_iot,
        Label::mqttsa_slowite,
    };
    return a;
}

}  // namespace iotsynth
