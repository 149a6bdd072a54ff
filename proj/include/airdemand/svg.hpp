#pragma once

// Minimal SVG document builder for the static result plots. Coordinates are
// formatted with fixed precision so identical inputs give identical bytes.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace airdemand {

class SvgDocument {
public:
    SvgDocument(double width, double height) : width_(width), height_(height) {}

    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double stroke_width = 1.0, const std::string& dash = "") {
        body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
                 "\" y2=\"" + num(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
                 num(stroke_width) + "\"";
        if (!dash.empty()) body_ += " stroke-dasharray=\"" + dash + "\"";
        body_ += "/>\n";
    }

    void circle(double cx, double cy, double r, const std::string& fill,
                const std::string& stroke = "none") {
        body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) +
                 "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"/>\n";
    }

    // Arc of a circle centered at (cx, cy) from angle a0 to a1 (radians,
    // standard orientation, y axis already flipped by the caller).
    void arc(double cx, double cy, double r, double a0, double a1, const std::string& stroke,
             double stroke_width = 1.0, const std::string& dash = "") {
        const double x0 = cx + r * std::cos(a0), y0 = cy - r * std::sin(a0);
        const double x1 = cx + r * std::cos(a1), y1 = cy - r * std::sin(a1);
        body_ += "<path d=\"M " + num(x0) + " " + num(y0) + " A " + num(r) + " " + num(r) +
                 " 0 0 0 " + num(x1) + " " + num(y1) + "\" fill=\"none\" stroke=\"" + stroke +
                 "\" stroke-width=\"" + num(stroke_width) + "\"";
        if (!dash.empty()) body_ += " stroke-dasharray=\"" + dash + "\"";
        body_ += "/>\n";
    }

    void text(double x, double y, const std::string& content, double size = 12.0,
              const std::string& anchor = "start", const std::string& fill = "#333333") {
        body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + num(size) +
                 "\" font-family=\"sans-serif\" text-anchor=\"" + anchor + "\" fill=\"" + fill +
                 "\">" + escape(content) + "</text>\n";
    }

    std::string str() const {
        return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" "
               "width=\"" + num(width_) + "\" height=\"" + num(height_) + "\" viewBox=\"0 0 " +
               num(width_) + " " + num(height_) + "\">\n<rect width=\"" + num(width_) +
               "\" height=\"" + num(height_) + "\" fill=\"#ffffff\"/>\n" + body_ + "</svg>\n";
    }

    void write(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write svg file: " + path.string());
        out << str();
        if (!out) throw std::runtime_error("write failed: " + path.string());
    }

    static std::string num(double v) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%.3f", v);
        return buf;
    }

    static std::string escape(const std::string& s) {
        std::string out;
        out.reserve(s.size());
        for (char c : s) {
            switch (c) {
                case '&': out += "&amp;"; break;
                case '<': out += "&lt;"; break;
                case '>': out += "&gt;"; break;
                default: out += c;
            }
        }
        return out;
    }

private:
    double width_;
    double height_;
    std::string body_;
};

}  // namespace airdemand
