import json
import math

from django.test import SimpleTestCase, override_settings

from lambert.baselines import newton_w
from lambert.core_iteration import SolveConfig
from lambert.lambertw import w0
from lambert.serializers import (
    BranchResultSerializer,
    EquationRequestSerializer,
    EvalRequestSerializer,
    NumberField,
    OutputFormat,
    SweepRequestSerializer,
    parse_number,
    round_significant,
)
from lambert.writers import DocumentWriter


class ParseNumberTests(SimpleTestCase):
    def test_notations(self):
        self.assertEqual(parse_number("0.25"), 0.25)
        self.assertEqual(parse_number("1e20"), 1e20)
        self.assertEqual(parse_number("-1e-3"), -1e-3)
        self.assertLess(abs(parse_number("10^20") / 1e20 - 1.0), 1e-15)
        self.assertEqual(parse_number("-10^3"), -1000.0)
        self.assertEqual(parse_number(" 2^-1 "), 0.5)

    def test_rejects(self):
        for text in ("abc", "nan", "inf", "10^500", "1e400", ""):
            with self.subTest(text=text), self.assertRaises(ValueError):
                parse_number(text)

    def test_round_significant(self):
        self.assertEqual(round_significant(1.0 / 3.0), 0.333333333333)
        self.assertIsNone(round_significant(math.inf))
        self.assertIsNone(round_significant(math.nan))
        self.assertIsNone(round_significant(None))
        self.assertEqual(NumberField().to_representation(2.0), 2.0)


class RequestSerializerTests(SimpleTestCase):
    def test_eval_defaults(self):
        request = EvalRequestSerializer(data={"x": "10^2"})
        self.assertTrue(request.is_valid(), request.errors)
        self.assertEqual(request.validated_data["x"], 100.0)
        self.assertEqual(request.validated_data["branch"], "w0")
        self.assertEqual(request.validated_data["method"], "m1")
        self.assertEqual(request.validated_data["format"], "text")
        cfg = request.solve_config()
        self.assertEqual(cfg, SolveConfig())

    @override_settings(LWQ_FORMAT="csv", LWQ_MAX_ITER=10)
    def test_settings_defaults(self):
        request = EvalRequestSerializer(data={"x": "1", "iters": "4", "tol": "1e-10", "trace": True})
        self.assertTrue(request.is_valid(), request.errors)
        self.assertEqual(request.validated_data["format"], "csv")
        cfg = request.solve_config()
        self.assertEqual(cfg.max_iter, 10)
        self.assertEqual(cfg.fixed_iters, 4)
        self.assertEqual(cfg.tol_rel, 1e-10)
        self.assertTrue(cfg.record_trace)

    def test_invalid_options(self):
        for data in (
            {"x": "abc"},
            {"x": "1", "format": "xml"},
            {"x": "1", "branch": "w1"},
            {"x": "1", "method": "secant"},
            {"x": "1", "seed": "-1"},
            {"x": "1", "tol": "0"},
            {"x": "1", "iters": "0"},
        ):
            with self.subTest(**data):
                self.assertFalse(EvalRequestSerializer(data=data).is_valid())

    def test_seed_list(self):
        request = SweepRequestSerializer(data={"x": "1e5", "seeds": "1,10,1e4,1e12"})
        self.assertTrue(request.is_valid(), request.errors)
        self.assertEqual(request.validated_data["seeds"], [1.0, 10.0, 1e4, 1e12])
        self.assertFalse(SweepRequestSerializer(data={"x": "1", "seeds": "1,,2"}).is_valid())
        self.assertFalse(SweepRequestSerializer(data={"x": "1", "seeds": "1,-2"}).is_valid())

    def test_equation_parameters(self):
        request = EquationRequestSerializer(data={"form": "plnxqx", "p": "2", "q": "3", "r": "3"})
        self.assertTrue(request.is_valid(), request.errors)
        self.assertEqual(request.validated_data["equation"]["q"], 3.0)
        missing = EquationRequestSerializer(data={"form": "plnxqx", "p": "2"})
        self.assertFalse(missing.is_valid())
        self.assertIn("--q --r", str(missing.errors))
        self.assertFalse(EquationRequestSerializer(data={"form": "plnxqx", "p": "0", "q": "1", "r": "1"}).is_valid())


class OutputSerializerTests(SimpleTestCase):
    def test_branch_result(self):
        data = BranchResultSerializer(w0(1e20)).data
        self.assertNotIn("trace", data)
        self.assertEqual(data["branch"], "w0")
        self.assertEqual(data["status"], "Converged")
        self.assertAlmostEqual(data["value"], 42.306755092, places=8)

    def test_trace_rows(self):
        result = w0(1.0, cfg=SolveConfig(record_trace=True))
        data = BranchResultSerializer(result, include_trace=True).data
        self.assertEqual(len(data["trace"]), result.iterations)
        self.assertEqual(data["trace"][0]["n"], 1)
        self.assertIsNotNone(data["trace"][0]["l"])

        baseline = newton_w(1.0, 0.0, cfg=SolveConfig(record_trace=True))
        rows = BranchResultSerializer(baseline, include_trace=True).data["trace"]
        self.assertIsNone(rows[0]["l"])
        self.assertIsNone(rows[0]["m"])


class DocumentWriterTests(SimpleTestCase):
    rows = [{"x": 1.0, "value": 1.0 / 3.0, "passed": True}, {"x": 2.0, "value": math.nan, "passed": False}]

    def test_invalid_format(self):
        with self.assertRaises(ValueError):
            DocumentWriter("xml")
        with self.assertRaisesMessage(ValueError, "Must be 'text', 'csv', or 'json'"):
            OutputFormat.parse("yaml")

    def test_format_tags(self):
        self.assertIs(OutputFormat.parse("csv"), OutputFormat.CSV)
        self.assertIs(DocumentWriter("json").fmt, OutputFormat.JSON)
        self.assertIs(DocumentWriter().fmt, OutputFormat.TEXT)
        request = EvalRequestSerializer(data={"x": "1", "format": "json"})
        self.assertTrue(request.is_valid(), request.errors)
        self.assertIs(request.validated_data["format"], OutputFormat.JSON)

    def test_json(self):
        text = DocumentWriter("json").render_rows("eval", [{"a": 1.0}])
        self.assertEqual(text, '{"command":"eval","rows":[{"a":1.0}]}\n')
        document = json.loads(DocumentWriter("json").render_rows("eval", self.rows))
        self.assertIsNone(document["rows"][1]["value"])
        self.assertEqual(document["rows"][0]["value"], 0.333333333333)

    def test_csv(self):
        text = DocumentWriter("csv").render_rows("eval", self.rows)
        self.assertEqual(text, "x,value,passed\n1,0.333333333333,true\n2,,false\n")
        self.assertEqual(text, DocumentWriter("csv").render_rows("eval", self.rows))

    def test_column_order(self):
        text = DocumentWriter("csv").render_rows("eval", self.rows, columns=["passed", "x"])
        self.assertEqual(text.splitlines()[0], "passed,x")

    def test_text_table(self):
        lines = DocumentWriter("text").render_rows("eval", self.rows).splitlines()
        self.assertEqual(lines[0].split(), ["x", "value", "passed"])
        self.assertEqual(lines[1].split(), ["1", "0.333333333333", "true"])

    def test_object(self):
        document = {"x": 1.0, "value": 0.5, "trace": [{"n": 1, "iterate": 1.0}]}
        text = DocumentWriter("text").render_object(document, list_key="trace")
        self.assertIn("value  0.5", text)
        self.assertIn("iterate", text)
        self.assertEqual(DocumentWriter("csv").render_object(document), "x,value\n1,0.5\n")
