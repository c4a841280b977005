//! JSON and CSV rendering of experiment rows and condition reports.
//! Numbers carry 17 significant digits; JSON output is one object per
//! row (newline-delimited).

use crate::error::Error;
use crate::exact::{ConditionReport, Method};
use crate::experiments::{Table1Row, Table2Row};
use crate::tls::TlsSolution;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

fn num(x: f64) -> String {
    format!("{:.16e}", x)
}

fn opt_json(x: Option<f64>) -> String {
    x.map(num).unwrap_or_else(|| "null".into())
}

fn opt_csv(x: Option<f64>) -> String {
    x.map(num).unwrap_or_else(|| "n/a".into())
}

pub fn method_name(m: Method) -> &'static str {
    match m {
        Method::Closed => "closed",
        Method::Svd => "svd",
        Method::Power => "power",
        Method::Oracle => "oracle",
    }
}

pub fn table1(rows: &[Result<Table1Row, Error>], format: Format) -> String {
    let mut out = String::new();
    if format == Format::Csv {
        out.push_str("gap,K,K_bar,kappa,K_p,iters\n");
    }
    for row in rows {
        match (row, format) {
            (Ok(r), Format::Json) => out.push_str(&format!(
                "{{\"gap\": {}, \"K\": {}, \"K_bar\": {}, \"kappa\": {}, \"K_p\": {}, \"iters\": {}}}\n",
                num(r.gap),
                num(r.k),
                num(r.k_bar),
                opt_json(r.kappa),
                num(r.k_p),
                r.iters
            )),
            (Ok(r), Format::Csv) => out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                num(r.gap),
                num(r.k),
                num(r.k_bar),
                opt_csv(r.kappa),
                num(r.k_p),
                r.iters
            )),
            (Err(e), Format::Json) => {
                out.push_str(&format!("{{\"error\": {:?}}}\n", e.to_string()))
            }
            (Err(e), Format::Csv) => out.push_str(&format!("error: {e}\n")),
        }
    }
    out
}

pub fn table2(rows: &[Result<Table2Row, Error>], format: Format) -> String {
    let mut out = String::new();
    if format == Format::Csv {
        out.push_str("m,K_rel,fwd_err,pred_K,pred_Kbar,pred_kappa\n");
    }
    for row in rows {
        match (row, format) {
            (Ok(r), Format::Json) => out.push_str(&format!(
                "{{\"m\": {}, \"K_rel\": {}, \"fwd_err\": {}, \"pred_K\": {}, \"pred_Kbar\": {}, \"pred_kappa\": {}}}\n",
                r.m,
                num(r.k_rel),
                num(r.fwd_err),
                num(r.pred_k),
                num(r.pred_kbar),
                opt_json(r.pred_kappa)
            )),
            (Ok(r), Format::Csv) => out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.m,
                num(r.k_rel),
                num(r.fwd_err),
                num(r.pred_k),
                num(r.pred_kbar),
                opt_csv(r.pred_kappa)
            )),
            (Err(e), Format::Json) => {
                out.push_str(&format!("{{\"error\": {:?}}}\n", e.to_string()))
            }
            (Err(e), Format::Csv) => out.push_str(&format!("error: {e}\n")),
        }
    }
    out
}

pub fn solution(sol: &TlsSolution, format: Format) -> String {
    match format {
        Format::Json => {
            let x: Vec<String> = sol.x.iter().map(|&v| num(v)).collect();
            format!(
                "{{\"x\": [{}], \"residual_norm\": {}, \"lambda_n1\": {}, \"genericity_gap\": {}}}\n",
                x.join(", "),
                num(sol.r.norm()),
                num(sol.lambda_n1),
                num(sol.genericity_gap)
            )
        }
        Format::Csv => {
            let mut out = String::from("field,index,value\n");
            for (i, &v) in sol.x.iter().enumerate() {
                out.push_str(&format!("x,{i},{}\n", num(v)));
            }
            out.push_str(&format!("residual_norm,,{}\n", num(sol.r.norm())));
            out.push_str(&format!("lambda_n1,,{}\n", num(sol.lambda_n1)));
            out.push_str(&format!("genericity_gap,,{}\n", num(sol.genericity_gap)));
            out
        }
    }
}

pub fn condition(report: &ConditionReport, format: Format) -> String {
    match format {
        Format::Json => format!(
            "{{\"K\": {}, \"K_rel\": {}, \"method\": \"{}\", \"iterations\": {}, \"K_bar\": {}, \"kappa\": {}}}\n",
            num(report.k_abs),
            opt_json(report.k_rel),
            method_name(report.method),
            report
                .iterations
                .map(|i| i.to_string())
                .unwrap_or_else(|| "null".into()),
            opt_json(report.bound_kbar),
            opt_json(report.bound_kappa)
        ),
        Format::Csv => format!(
            "K,K_rel,method,iterations,K_bar,kappa\n{},{},{},{},{},{}\n",
            num(report.k_abs),
            opt_csv(report.k_rel),
            method_name(report.method),
            report
                .iterations
                .map(|i| i.to_string())
                .unwrap_or_else(|| "n/a".into()),
            opt_csv(report.bound_kbar),
            opt_csv(report.bound_kappa)
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table1_renders_both_formats() {
        let rows = vec![Ok(Table1Row {
            gap: 1e-4,
            k: 2.0,
            k_bar: 3.0,
            kappa: None,
            k_p: 2.0,
            iters: 5,
        })];
        let json = table1(&rows, Format::Json);
        assert!(json.contains("\"kappa\": null"));
        assert!(json.contains("\"iters\": 5"));
        let csv = table1(&rows, Format::Csv);
        assert!(csv.starts_with("gap,K,K_bar,kappa,K_p,iters\n"));
        assert!(csv.contains(",n/a,"));
    }

    #[test]
    fn numbers_carry_17_significant_digits() {
        let s = num(std::f64::consts::PI);
        assert!(s.starts_with("3.1415926535897931"));
    }
}
