#include <fstream>
#include <memory>

#include "gapkit/error.hpp"
#include "gapkit/io.hpp"

namespace gapkit {

using nlohmann::json;

namespace {

double number(const json& j, const char* what) {
    if (!j.is_number()) fail(ErrorKind::Format, std::string(what) + " must be a number");
    return j.get<double>();
}

Segment segment_from_json(const json& j) {
    if (j.is_number()) {
        const double v = j.get<double>();
        return {v, v};
    }
    if (j.is_array()) {
        if (j.size() != 2) fail(ErrorKind::Format, "segment arrays need exactly two values");
        return {number(j[0], "segment value"), number(j[1], "segment value")};
    }
    if (j.is_object()) {
        if (!j.contains("left") || !j.contains("right")) {
            fail(ErrorKind::Format, "segment objects need \"left\" and \"right\"");
        }
        return {number(j["left"], "segment left"), number(j["right"], "segment right")};
    }
    fail(ErrorKind::Format, "unrecognised segment entry");
}

}  // namespace

Potential potential_from_json(const json& j) {
    if (!j.is_object()) fail(ErrorKind::Format, "potential descriptor must be an object");
    if (!j.contains("breakpoints") || !j["breakpoints"].is_array()) {
        fail(ErrorKind::Format, "missing \"breakpoints\" array");
    }
    if (!j.contains("segments") || !j["segments"].is_array()) {
        fail(ErrorKind::Format, "missing \"segments\" array");
    }
    std::vector<double> bps;
    for (const auto& b : j["breakpoints"]) bps.push_back(number(b, "breakpoint"));
    std::vector<Segment> segs;
    for (const auto& s : j["segments"]) segs.push_back(segment_from_json(s));

    PotentialClass cls = PotentialClass::None;
    if (j.contains("class") && !j["class"].is_null()) {
        if (!j["class"].is_string()) fail(ErrorKind::Format, "\"class\" must be a string");
        try {
            cls = potential_class_from_string(j["class"].get<std::string>());
        } catch (const Error& e) {
            fail(ErrorKind::Format, e.what());
        }
    }
    std::optional<double> bound;
    if (j.contains("bound") && !j["bound"].is_null()) bound = number(j["bound"], "bound");
    std::shared_ptr<const Potential> background;
    if (j.contains("background") && !j["background"].is_null()) {
        background = std::make_shared<const Potential>(potential_from_json(j["background"]));
    }
    int sign = 1;
    if (j.contains("sign") && !j["sign"].is_null()) {
        const double s = number(j["sign"], "sign");
        if (s != 1.0 && s != -1.0) fail(ErrorKind::Format, "\"sign\" must be 1 or -1");
        sign = static_cast<int>(s);
    }
    return Potential(std::move(bps), std::move(segs), cls, bound, std::move(background), sign);
}

json potential_to_json(const Potential& V) {
    json j;
    j["breakpoints"] = std::vector<double>(V.breakpoints().begin(), V.breakpoints().end());
    json segs = json::array();
    for (const Segment& s : V.segments()) {
        if (s.is_constant()) {
            segs.push_back(s.left);
        } else {
            segs.push_back(json::array({s.left, s.right}));
        }
    }
    j["segments"] = std::move(segs);
    j["class"] = to_string(V.tag());
    if (V.bound()) j["bound"] = *V.bound();
    j["background"] = V.background() ? potential_to_json(*V.background()) : json(nullptr);
    j["sign"] = V.sign();
    return j;
}

Potential read_potential(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail(ErrorKind::Format, path + ": " + e.what());
    }
    return potential_from_json(j);
}

void write_potential(const Potential& V, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::Io, "cannot write " + path);
    out << potential_to_json(V).dump(2) << '\n';
    if (!out) fail(ErrorKind::Io, "write failed for " + path);
}

}  // namespace gapkit
