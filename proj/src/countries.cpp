#include "scnsim/scopes.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

namespace scnsim {

namespace {

std::string fold(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t begin = 0, end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    bool in_space = false;
    for (std::size_t i = begin; i < end; ++i) {
        const unsigned char c = static_cast<unsigned char>(s[i]);
        if (std::isspace(c)) {
            in_space = true;
            continue;
        }
        if (in_space) {
            out.push_back(' ');
            in_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

const std::unordered_map<std::string, std::string>& name_table() {
    static const std::unordered_map<std::string, std::string> table = {
        {"afghanistan", "AF"},
        {"albania", "AL"},
        {"algeria", "DZ"},
        {"angola", "AO"},
        {"argentina", "AR"},
        {"aruba", "AW"},
        {"australia", "AU"},
        {"austria", "AT"},
        {"azerbaijan", "AZ"},
        {"bahrain", "BH"},
        {"bangladesh", "BD"},
        {"belarus", "BY"},
        {"belgium", "BE"},
        {"bermuda", "BM"},
        {"bhutan", "BT"},
        {"bolivia", "BO"},
        {"bosnia-herzegovina", "BA"},
        {"bosnia and herzegovina", "BA"},
        {"brazil", "BR"},
        {"british virgin islands", "VG"},
        {"bulgaria", "BG"},
        {"burkina faso", "BF"},
        {"cambodia", "KH"},
        {"cameroon", "CM"},
        {"canada", "CA"},
        {"cayman islands", "KY"},
        {"chad", "TD"},
        {"chile", "CL"},
        {"china", "CN"},
        {"colombia", "CO"},
        {"costa rica", "CR"},
        {"cote d'ivoire", "CI"},
        {"côte d'ivoire", "CI"},
        {"ivory coast", "CI"},
        {"croatia", "HR"},
        {"cuba", "CU"},
        {"curacao", "CW"},
        {"curaçao", "CW"},
        {"cyprus", "CY"},
        {"czech republic", "CZ"},
        {"czechia", "CZ"},
        {"democratic republic of the congo", "CD"},
        {"dr congo", "CD"},
        {"denmark", "DK"},
        {"dominica", "DM"},
        {"dominican republic", "DO"},
        {"ecuador", "EC"},
        {"egypt", "EG"},
        {"el salvador", "SV"},
        {"estonia", "EE"},
        {"ethiopia", "ET"},
        {"fiji", "FJ"},
        {"finland", "FI"},
        {"france", "FR"},
        {"germany", "DE"},
        {"ghana", "GH"},
        {"great britain", "GB"},
        {"greece", "GR"},
        {"guatemala", "GT"},
        {"guinea", "GN"},
        {"guyana", "GY"},
        {"honduras", "HN"},
        {"hong kong", "HK"},
        {"hungary", "HU"},
        {"iceland", "IS"},
        {"india", "IN"},
        {"indonesia", "ID"},
        {"iran", "IR"},
        {"iraq", "IQ"},
        {"ireland", "IE"},
        {"israel", "IL"},
        {"italy", "IT"},
        {"jamaica", "JM"},
        {"japan", "JP"},
        {"jordan", "JO"},
        {"kazakhstan", "KZ"},
        {"kenya", "KE"},
        {"kuwait", "KW"},
        {"kyrgyzstan", "KG"},
        {"laos", "LA"},
        {"latvia", "LV"},
        {"lebanon", "LB"},
        {"liberia", "LR"},
        {"libya", "LY"},
        {"liechtenstein", "LI"},
        {"lithuania", "LT"},
        {"luxembourg", "LU"},
        {"madagascar", "MG"},
        {"malaysia", "MY"},
        {"mali", "ML"},
        {"malta", "MT"},
        {"marshall islands", "MH"},
        {"mauritania", "MR"},
        {"mauritius", "MU"},
        {"mexico", "MX"},
        {"moldova", "MD"},
        {"mongolia", "MN"},
        {"morocco", "MA"},
        {"mozambique", "MZ"},
        {"myanmar", "MM"},
        {"namibia", "NA"},
        {"netherlands", "NL"},
        {"new caledonia", "NC"},
        {"new zealand", "NZ"},
        {"nigeria", "NG"},
        {"north korea", "KP"},
        {"north macedonia", "MK"},
        {"norway", "NO"},
        {"oman", "OM"},
        {"pakistan", "PK"},
        {"panama", "PA"},
        {"papua new guinea", "PG"},
        {"peru", "PE"},
        {"philippines", "PH"},
        {"poland", "PL"},
        {"portugal", "PT"},
        {"puerto rico", "PR"},
        {"qatar", "QA"},
        {"romania", "RO"},
        {"russia", "RU"},
        {"russian federation", "RU"},
        {"saudi arabia", "SA"},
        {"serbia", "RS"},
        {"singapore", "SG"},
        {"slovakia", "SK"},
        {"slovenia", "SI"},
        {"south africa", "ZA"},
        {"south korea", "KR"},
        {"korea, republic of", "KR"},
        {"spain", "ES"},
        {"sri lanka", "LK"},
        {"suriname", "SR"},
        {"sweden", "SE"},
        {"switzerland", "CH"},
        {"taiwan", "TW"},
        {"tanzania", "TZ"},
        {"thailand", "TH"},
        {"tunisia", "TN"},
        {"turkey", "TR"},
        {"turkiye", "TR"},
        {"türkiye", "TR"},
        {"uganda", "UG"},
        {"uk", "GB"},
        {"ukraine", "UA"},
        {"united arab emirates", "AE"},
        {"united kingdom", "GB"},
        {"united states", "US"},
        {"united states of america", "US"},
        {"usa", "US"},
        {"uruguay", "UY"},
        {"us virgin islands", "VI"},
        {"uzbekistan", "UZ"},
        {"venezuela", "VE"},
        {"vietnam", "VN"},
        {"viet nam", "VN"},
        {"virgin islands", "VG"},
        {"zambia", "ZM"},
        {"zimbabwe", "ZW"},
    };
    return table;
}

} // namespace

std::optional<std::string> normalize_country(std::string_view raw) {
    const std::string key = fold(raw);
    if (key.empty()) return std::nullopt;
    const auto& table = name_table();
    if (auto it = table.find(key); it != table.end()) return it->second;
    if (key.size() == 2 && std::isalpha(static_cast<unsigned char>(key[0])) &&
        std::isalpha(static_cast<unsigned char>(key[1]))) {
        std::string code = key;
        for (char& c : code) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return code;
    }
    return std::nullopt;
}

} // namespace scnsim
