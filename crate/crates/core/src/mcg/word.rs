//! Twist words and their textual syntax.
//!
//! A word is a whitespace-separated sequence of letters `name^power`, where
//! the power defaults to 1. A letter may twist along the image of a curve
//! under a mapping class: `a2[b2]` is the curve `τ_{b2}(a2)`, and the
//! bracketed frame is itself a word (`a2[b2 c1^-1]^3`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// The curve a letter twists along.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveRef {
    Named(String),
    Image(Box<ImageCurve>),
}

/// The curve `frame(base)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ImageCurve {
    pub base: String,
    pub frame: TwistWord,
}

impl CurveRef {
    pub fn named(name: impl Into<String>) -> Self {
        CurveRef::Named(name.into())
    }

    pub fn image(base: impl Into<String>, frame: TwistWord) -> Self {
        CurveRef::Image(Box::new(ImageCurve { base: base.into(), frame }))
    }

    pub fn as_named(&self) -> Option<&str> {
        match self {
            CurveRef::Named(n) => Some(n),
            CurveRef::Image(_) => None,
        }
    }

    /// Every plain curve name mentioned, including inside frames.
    pub fn mentioned_names(&self, out: &mut Vec<String>) {
        match self {
            CurveRef::Named(n) => out.push(n.clone()),
            CurveRef::Image(img) => {
                out.push(img.base.clone());
                for l in img.frame.letters() {
                    l.curve.mentioned_names(out);
                }
            }
        }
    }
}

impl fmt::Display for CurveRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveRef::Named(n) => write!(f, "{n}"),
            CurveRef::Image(img) => write!(f, "{}[{}]", img.base, img.frame),
        }
    }
}

/// One factor `τ_curve^power`; the power is never zero inside a word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub curve: CurveRef,
    pub power: i64,
}

impl Letter {
    pub fn new(curve: CurveRef, power: i64) -> Self {
        Letter { curve, power }
    }

    pub fn named(name: &str, power: i64) -> Self {
        Letter { curve: CurveRef::named(name), power }
    }

    pub fn inverse(&self) -> Self {
        Letter { curve: self.curve.clone(), power: -self.power }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.power == 1 {
            write!(f, "{}", self.curve)
        } else {
            write!(f, "{}^{}", self.curve, self.power)
        }
    }
}

/// A word in Dehn twists, written in composition order.
///
/// Adjacent letters on the same curve are merged and zero powers dropped on
/// construction, so two words that differ only by such merges compare equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistWord {
    letters: Vec<Letter>,
}

impl TwistWord {
    pub fn empty() -> Self {
        TwistWord::default()
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut w = TwistWord::default();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// Single letter `τ_name^power`.
    pub fn single(name: &str, power: i64) -> Self {
        TwistWord::from_letters([Letter::named(name, power)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Appends a letter, merging with the last one when on the same curve.
    pub fn push(&mut self, letter: Letter) {
        if letter.power == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.curve == letter.curve {
                last.power += letter.power;
                if last.power == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push(letter);
    }

    pub fn concat(&self, other: &TwistWord) -> TwistWord {
        let mut w = self.clone();
        for l in &other.letters {
            w.push(l.clone());
        }
        w
    }

    pub fn inverse(&self) -> TwistWord {
        TwistWord::from_letters(self.letters.iter().rev().map(Letter::inverse))
    }

    pub fn pow(&self, e: u32) -> TwistWord {
        let mut w = TwistWord::empty();
        for _ in 0..e {
            w = w.concat(self);
        }
        w
    }

    /// `self` rotated left by `k` letters.
    pub fn rotate(&self, k: usize) -> TwistWord {
        if self.letters.is_empty() {
            return self.clone();
        }
        let k = k % self.letters.len();
        TwistWord::from_letters(self.letters[k..].iter().chain(&self.letters[..k]).cloned())
    }

    /// Renames every plain curve (bases and frames included).
    pub fn rename(&self, f: &dyn Fn(&str) -> String) -> TwistWord {
        fn curve(c: &CurveRef, f: &dyn Fn(&str) -> String) -> CurveRef {
            match c {
                CurveRef::Named(n) => CurveRef::Named(f(n)),
                CurveRef::Image(img) => CurveRef::image(f(&img.base), img.frame.rename(f)),
            }
        }
        TwistWord::from_letters(self.letters.iter().map(|l| Letter::new(curve(&l.curve, f), l.power)))
    }

    /// Sum of powers of letters on the plain curve `name`.
    pub fn exponent_sum(&self, name: &str) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.curve.as_named() == Some(name))
            .map(|l| l.power)
            .sum()
    }

    pub fn mentioned_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        for l in &self.letters {
            l.curve.mentioned_names(&mut out);
        }
        out
    }

    pub(crate) fn into_letters(self) -> Vec<Letter> {
        self.letters
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for TwistWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let w = p.word()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected character"));
        }
        Ok(w)
    }
}

impl Serialize for TwistWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TwistWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn word(&mut self) -> Result<TwistWord> {
        let mut w = TwistWord::empty();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(b']') => return Ok(w),
                _ => {
                    let l = self.letter()?;
                    w.push(l);
                }
            }
        }
    }

    fn letter(&mut self) -> Result<Letter> {
        let name = self.ident()?;
        let curve = if self.peek() == Some(b'[') {
            self.pos += 1;
            let frame = self.word()?;
            if self.peek() != Some(b']') {
                return Err(self.err("expected `]`"));
            }
            self.pos += 1;
            CurveRef::image(name, frame)
        } else {
            CurveRef::Named(name)
        };
        let power = if self.peek() == Some(b'^') {
            self.pos += 1;
            self.integer()?
        } else {
            1
        };
        Ok(Letter::new(curve, power))
    }

    fn ident(&mut self) -> Result<String> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' || c == b'.' || c == b'\'' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.err("expected curve name"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        if matches!(self.peek(), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse().map_err(|_| Error::Parse { pos: start, msg: "expected integer power".into() })
    }
}
