"""
marshmallow schemas for every JSON document the command line emits.
Schemas dump the library's dataclasses directly.
"""

from marshmallow import Schema, fields


class HypothesisCheckSchema(Schema):
    hypothesis = fields.String()
    passed = fields.Boolean(data_key="pass")
    detail = fields.String()


class ValidationReportSchema(Schema):
    passed = fields.Boolean(data_key="pass")
    checks = fields.List(fields.Nested(HypothesisCheckSchema))
    warnings = fields.List(fields.String())


class SeriesSchema(Schema):
    order = fields.Integer()
    coefficients = fields.Method("dump_coefficients")

    def dump_coefficients(self, series):
        return [[c.numerator, c.denominator] for c in series.coefficients]


class PolynomialSchema(Schema):
    coefficients = fields.List(fields.Integer())
    degree = fields.Integer()
    factored = fields.Method("dump_factored")

    def dump_factored(self, polynomial):
        return polynomial.factored()


class SpectralDataSchema(Schema):
    lam = fields.Float(data_key="lambda")
    lower_bound = fields.Float()
    upper_bound = fields.Float()
    radius = fields.Float()
    power_estimate = fields.Float()
    root_estimate = fields.Float()
    iterations = fields.Integer()
    bounds_hold = fields.Boolean()


class ParamWindowSchema(Schema):
    lam = fields.Float(data_key="lambda")
    radius = fields.Float()
    x0 = fields.Float()
    x1 = fields.Float()
    inv_2m_lambda = fields.Float()
    mode = fields.String()
    a_range = fields.Method("dump_a_range")
    a_default = fields.Float(allow_none=True)
    l_sigma = fields.Float(allow_none=True)
    sigma_default = fields.Float(allow_none=True)
    strict_window_nonempty = fields.Boolean()
    chain_holds = fields.Boolean()

    def dump_a_range(self, window):
        return [window.a_low, window.a_high]


class AuditEntrySchema(Schema):
    claim_id = fields.String()
    paper_location = fields.String()
    statement = fields.String()
    lhs = fields.Float()
    rhs = fields.Float()
    holds = fields.Boolean()
    note = fields.String()


class AuditReportSchema(Schema):
    n = fields.Integer()
    m = fields.Integer()
    entries = fields.List(fields.Nested(AuditEntrySchema))


class EntropyParamsSchema(Schema):
    a = fields.Float()
    sigma = fields.Float()
    mode = fields.String()
    l_sigma = fields.Float()


class EntropyResultSchema(Schema):
    value = fields.Float()
    formal_group_value = fields.Float()
    shannon = fields.Float()
    W = fields.Integer()
    params = fields.Nested(EntropyParamsSchema)
    window = fields.Nested(ParamWindowSchema)


class PrimeCycleSchema(Schema):
    symbols = fields.List(fields.Integer())
    length = fields.Integer()


class AlphabetSchema(Schema):
    size = fields.Integer()
    symbols = fields.Method("dump_symbols")

    def dump_symbols(self, alphabet):
        return alphabet.to_dict()["symbols"]


class FactorSchema(Schema):
    kind = fields.String()
    symbols = fields.List(fields.Integer())
    power = fields.Integer()
