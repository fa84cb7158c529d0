from dataclasses import dataclass, field


@dataclass
class Report:
    """Itemized pass/fail list; ``passed`` is the conjunction."""

    items: list = field(default_factory=list)

    def check(self, name, ok, detail=""):
        self.items.append((name, bool(ok), detail))
        return bool(ok)

    @property
    def passed(self):
        return all(ok for _, ok, _ in self.items)

    def failures(self):
        return [(name, detail) for name, ok, detail in self.items if not ok]

    def lines(self):
        out = []
        for name, ok, detail in self.items:
            line = f"{'pass' if ok else 'FAIL'} {name}"
            if detail:
                line += f" ({detail})"
            out.append(line)
        return out

    def __bool__(self):
        return self.passed
