/// `10^(db/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thirteen_db() {
        assert_eq!(db_to_linear(13.0), 10f64.powf(1.3));
        assert!((db_to_linear(13.0) - 19.952_623_149_688_8).abs() < 1e-12);
        assert_eq!(db_to_linear(0.0), 1.0);
    }
}
