"""Report dataclasses shared between modules."""

from dataclasses import dataclass, field


@dataclass
class ComparisonReport:
    """Comparison-geometry audit: CN defects, ball-volume defects, angle defects.

    Used both by the space-level CAT(0) audit and by pull-back metric checks.
    Defects follow the convention that nonpositive values are consistent with
    nonpositive curvature; a positive value is a violation witness.
    """

    cn_defect_max: float = 0.0
    # (point-ish id, radius, defect) triples for ball-volume comparisons
    bg_defects: list = field(default_factory=list)
    # per-vertex 2*pi - link length (negative at cone points)
    angle_defects: list = field(default_factory=list)
    link_violations: list = field(default_factory=list)
    samples: int = 0
    notes: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "cn_defect_max": self.cn_defect_max,
            "bg_defects": self.bg_defects,
            "angle_defects": self.angle_defects,
            "link_violations": self.link_violations,
            "samples": self.samples,
            "notes": self.notes,
        }
