use serde::{Deserialize, Serialize};

/// One turn's profit and loss statement.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ProfitAndLoss {
    pub sales: f64,
    pub cogs: f64,
    pub gross_margin: f64,
    pub sga: f64,
    pub ebitda: f64,
    pub depreciation: f64,
    pub ebit: f64,
    pub interest: f64,
    pub income_before_taxes: f64,
    pub taxes: f64,
    pub net_income: f64,
}

impl ProfitAndLoss {
    /// Builds the statement top-down from its inputs.
    pub fn compute(
        sales: f64,
        cogs: f64,
        sga: f64,
        depreciation: f64,
        interest: f64,
        tax_rate: f64,
    ) -> Self {
        let gross_margin = sales - cogs;
        let ebitda = gross_margin - sga;
        let ebit = ebitda - depreciation;
        let income_before_taxes = ebit - interest;
        let taxes = tax_rate * income_before_taxes.max(0.0);
        Self {
            sales,
            cogs,
            gross_margin,
            sga,
            ebitda,
            depreciation,
            ebit,
            interest,
            income_before_taxes,
            taxes,
            net_income: income_before_taxes - taxes,
        }
    }

    /// Whether every subtotal equals the difference it is defined as.
    pub fn chain_holds(&self, tax_rate: f64) -> bool {
        self.gross_margin == self.sales - self.cogs
            && self.ebitda == self.gross_margin - self.sga
            && self.ebit == self.ebitda - self.depreciation
            && self.income_before_taxes == self.ebit - self.interest
            && self.taxes == tax_rate * self.income_before_taxes.max(0.0)
            && self.net_income == self.income_before_taxes - self.taxes
    }
}

/// End-of-turn balance sheet.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BalanceSheet {
    pub cash: f64,
    pub inventory: f64,
    pub equipment_net: f64,
    pub total_assets: f64,
    pub debt: f64,
    pub equity: f64,
    pub total_liabilities_and_equity: f64,
}

impl BalanceSheet {
    pub fn new(cash: f64, inventory: f64, equipment_net: f64, debt: f64, equity: f64) -> Self {
        Self {
            cash,
            inventory,
            equipment_net,
            total_assets: cash + inventory + equipment_net,
            debt,
            equity,
            total_liabilities_and_equity: debt + equity,
        }
    }

    /// `|assets - (liabilities + equity)|` relative to the larger side,
    /// floored at 1 currency unit.
    pub fn identity_gap(&self) -> f64 {
        let scale = self
            .total_assets
            .abs()
            .max(self.total_liabilities_and_equity.abs())
            .max(1.0);
        (self.total_assets - self.total_liabilities_and_equity).abs() / scale
    }
}
