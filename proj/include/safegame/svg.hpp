#ifndef SAFEGAME_SVG_HPP
#define SAFEGAME_SVG_HPP

#include <string>
#include <vector>

namespace safegame {

// Minimal static SVG plot: colored scatter points and polylines on linear axes.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string xLabel, std::string yLabel);

  // `shade` in [0, 1] picks a color from blue (0) to red (1).
  void addPoint(double x, double y, double shade = 0.0);
  void addLine(std::vector<double> xs, std::vector<double> ys, double shade = 0.0,
               std::string label = {});

  std::string render(int width = 640, int height = 480) const;

 private:
  struct Point {
    double x, y, shade;
  };
  struct Line {
    std::vector<double> xs, ys;
    double shade;
    std::string label;
  };

  std::string title_, xLabel_, yLabel_;
  std::vector<Point> points_;
  std::vector<Line> lines_;
};

}  // namespace safegame

#endif  // SAFEGAME_SVG_HPP
