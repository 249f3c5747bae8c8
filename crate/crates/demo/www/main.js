import init, { lex_preview, cosine_counter, simulate } from './pkg/meeeftcd_demo.js';

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function escape(s) {
  return s.replace(/[&<>"]/g, (c) => ({ '&': '&amp;', '<': '&lt;', '>': '&gt;', '"': '&quot;' })[c]);
}

function call(fn, ...args) {
  const out = JSON.parse(fn(...args));
  if (out.error) throw new Error(out.error);
  return out;
}

function showError(el, err) {
  el.innerHTML = `<p class="error">${escape(err.message)}</p>`;
}

function runLexer() {
  const out = call(lex_preview, $('email').value);
  $('lex-summary').textContent =
    `${out.tokens.length} tokens, ${out.kept} reach the basic-filtered vocabulary` +
    (out.has_terminator ? '' : ' (no X-FileName line: whole email lexed)');
  $('lex-out').innerHTML = out.tokens
    .map((t) => `<span class="tok ${t.stage}" title="${t.stage}">${escape(t.token)}</span>`)
    .join('');
}

function runCosine() {
  const c = num('cos-c');
  const slider = $('cos-shared');
  slider.max = c;
  if (num('cos-shared') > c) slider.value = c;
  $('cos-shared-v').textContent = slider.value;
  try {
    const r = call(cosine_counter, c, num('cos-shared'), BigInt(num('cos-seed')));
    $('cos-out').innerHTML = `
      <table>
        <tr><th>dense cosine</th><td>${r.dense.toFixed(15)}</td></tr>
        <tr><th>sparse index merge</th><td>${r.binary.toFixed(15)}</td></tr>
        <tr><th>1 &minus; shared / c</th><td>${r.counted.toFixed(15)}</td></tr>
      </table>
      <pre>dimension ${r.dimension}\na = [${r.a.join(' ')}]\nb = [${r.b.join(' ')}]</pre>`;
  } catch (e) {
    showError($('cos-out'), e);
  }
}

function runSimulation() {
  const out = $('sim-out');
  try {
    const r = call(
      simulate,
      BigInt(num('sim-seed')),
      num('sim-labels'),
      num('sim-per'),
      num('sim-topk'),
      num('sim-mindoc'),
      num('sim-mintop'),
      num('sim-k'),
    );
    out.innerHTML = `
      <div>${r.heatmap_svg}</div>
      <div>
        <pre>${escape(r.report)}</pre>
        <p><b>${r.primary_words.length} primary words:</b> ${r.primary_words.map(escape).join(', ')}</p>
      </div>`;
  } catch (e) {
    showError(out, e);
  }
}

await init();
$('lex-run').addEventListener('click', runLexer);
for (const id of ['cos-c', 'cos-shared', 'cos-seed']) $(id).addEventListener('input', runCosine);
$('sim-run').addEventListener('click', runSimulation);
runLexer();
runCosine();
runSimulation();
