use std::str::FromStr;

use sadic::{Alphabet, RectPattern};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Ppm,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "ascii" => Ok(Format::Ascii),
            "ppm" => Ok(Format::Ppm),
            _ => Err(format!("unknown format `{s}` (expected ascii or ppm)")),
        }
    }
}

/// One RGB colour per letter, indexed like the alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Palette {
    colors: Vec<[u8; 3]>,
}

impl Palette {
    /// Evenly spaced grays, letter 0 black and the last letter white.
    pub fn grayscale(letters: usize) -> Self {
        let colors = (0..letters)
            .map(|i| {
                let v = if letters <= 1 {
                    0
                } else {
                    (i * 255 / (letters - 1)) as u8
                };
                [v, v, v]
            })
            .collect();
        Palette { colors }
    }

    pub fn from_colors(colors: Vec<[u8; 3]>) -> Self {
        Palette { colors }
    }

    /// Parses `#rrggbb,#rrggbb,...` in alphabet order, or
    /// `glyph=#rrggbb,...` naming every letter.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self> {
        let entries: Vec<&str> = text
            .split(',')
            .map(str::trim)
            .filter(|e| !e.is_empty())
            .collect();
        let named = entries.iter().any(|e| e.contains('='));
        let mut colors: Vec<Option<[u8; 3]>> = vec![None; alphabet.len()];
        if named {
            for entry in &entries {
                let (glyph, hex) = entry
                    .split_once('=')
                    .ok_or_else(|| CliError::Palette(format!("entry `{entry}` has no `=`")))?;
                let letter = alphabet.letter(glyph.trim()).ok_or_else(|| {
                    CliError::Palette(format!("`{glyph}` is not in the alphabet"))
                })?;
                colors[letter.index()] = Some(parse_hex(hex.trim())?);
            }
        } else {
            if entries.len() > alphabet.len() {
                return Err(CliError::Palette(format!(
                    "{} colours for {} letters",
                    entries.len(),
                    alphabet.len()
                )));
            }
            for (slot, hex) in colors.iter_mut().zip(&entries) {
                *slot = Some(parse_hex(hex)?);
            }
        }
        let colors = colors
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                c.ok_or_else(|| {
                    CliError::Palette(format!(
                        "no colour for `{}`",
                        alphabet.symbol(sadic::Letter::new(i))
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Palette { colors })
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color(&self, index: usize) -> Option<[u8; 3]> {
        self.colors.get(index).copied()
    }
}

fn parse_hex(text: &str) -> Result<[u8; 3]> {
    let digits = text.strip_prefix('#').unwrap_or(text);
    if digits.len() != 6 || !digits.is_ascii() {
        return Err(CliError::Palette(format!(
            "`{text}` is not a #rrggbb colour"
        )));
    }
    let mut out = [0u8; 3];
    for (i, byte) in out.iter_mut().enumerate() {
        *byte = u8::from_str_radix(&digits[2 * i..2 * i + 2], 16)
            .map_err(|_| CliError::Palette(format!("`{text}` is not a #rrggbb colour")))?;
    }
    Ok(out)
}

/// The pattern as glyph rows, top row first, without a trailing newline.
pub fn render_ascii(p: &RectPattern, alphabet: &Alphabet) -> String {
    alphabet.format_pattern(p)
}

/// A binary PPM with one pixel per cell, top row first.
pub fn render_ppm(p: &RectPattern, palette: &Palette) -> Result<Vec<u8>> {
    let mut out = format!("P6\n{} {}\n255\n", p.width(), p.height()).into_bytes();
    out.reserve(3 * p.len());
    for row in p.rows_top_down() {
        for letter in row {
            let rgb = palette.color(letter.index()).ok_or_else(|| {
                CliError::Palette(format!(
                    "{} colours do not cover letter {}",
                    palette.len(),
                    letter.index()
                ))
            })?;
            out.extend_from_slice(&rgb);
        }
    }
    Ok(out)
}

pub fn render(
    p: &RectPattern,
    alphabet: &Alphabet,
    format: Format,
    palette: Option<&Palette>,
) -> Result<Vec<u8>> {
    match format {
        Format::Ascii => {
            let mut text = render_ascii(p, alphabet);
            text.push('\n');
            Ok(text.into_bytes())
        }
        Format::Ppm => match palette {
            Some(palette) => render_ppm(p, palette),
            None => render_ppm(p, &Palette::grayscale(alphabet.len())),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ob() -> Alphabet {
        Alphabet::from_glyphs("ob").unwrap()
    }

    #[test]
    fn ascii_lists_rows_from_the_top() {
        let p = ob().parse_pattern("oo/bo").unwrap();
        assert_eq!(render_ascii(&p, &ob()), "oo\nbo");
    }

    #[test]
    fn ppm_header_and_pixels() {
        let p = ob().parse_pattern("oo/bo").unwrap();
        let bytes = render_ppm(&p, &Palette::grayscale(2)).unwrap();
        let header = b"P6\n2 2\n255\n";
        assert_eq!(&bytes[..header.len()], header);
        assert_eq!(bytes.len(), header.len() + 12);
        assert_eq!(
            &bytes[header.len()..],
            &[0, 0, 0, 0, 0, 0, 255, 255, 255, 0, 0, 0]
        );
    }

    #[test]
    fn palettes_must_cover_the_alphabet() {
        assert!(matches!(
            Palette::parse("#ff0000", &ob()),
            Err(CliError::Palette(_))
        ));
        assert!(matches!(
            Palette::parse("o=#ffffff", &ob()),
            Err(CliError::Palette(_))
        ));
        let named = Palette::parse("b=#000000, o=#ffffff", &ob()).unwrap();
        assert_eq!(named, Palette::from_colors(vec![[255; 3], [0; 3]]));
        let p = ob().parse_pattern("ob").unwrap();
        assert!(render_ppm(&p, &Palette::from_colors(vec![[0; 3]])).is_err());
    }
}
