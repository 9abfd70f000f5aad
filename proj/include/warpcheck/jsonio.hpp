#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace warpcheck {

/// Minimal streaming JSON writer with deterministic output: keys appear in
/// insertion order and every double is printed with "%.17g" so reports are
/// byte-identical across runs and round-trip exactly. (The bundled JSON
/// library is used for parsing configs; its serializer chooses shortest-form
/// numbers, which is why output goes through this writer instead.)
class JsonWriter {
  public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& k);
    JsonWriter& value(double v);
    JsonWriter& value(std::uint64_t v);
    JsonWriter& value(int v);
    JsonWriter& value(bool v);
    JsonWriter& value(const std::string& v);
    JsonWriter& value(const char* v);

    /// Splice prebuilt JSON text in as the next value (comma handling as for
    /// value()); the text is not validated.
    JsonWriter& raw_item(const std::string& json_text);

    const std::string& str() const { return out_; }

    static std::string number(double v); // "%.17g"

  private:
    void comma();
    void write_string(const std::string& s);

    std::string out_;
    std::vector<bool> has_item_; // per open container
    bool after_key_ = false;
};

/// Write `text` to `path`, creating parent directories. Throws
/// std::runtime_error on I/O failure.
void write_file(const std::string& path, const std::string& text);

} // namespace warpcheck
