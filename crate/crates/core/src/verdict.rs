use std::fmt;

/// Three-valued answer of a decision procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<Y, N = String> {
    Yes(Y),
    No(N),
    Unknown(String),
}

impl<Y, N> Verdict<Y, N> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Yes(_) => "yes",
            Verdict::No(_) => "no",
            Verdict::Unknown(_) => "unknown",
        }
    }
}

impl<Y, N> fmt::Display for Verdict<Y, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}
