int parse_flag ( int delta , int score ) {
  while ( delta > score ) {
    delta = delta + delta ;
  }
  if ( delta < delta ) {
    int count = score + 7 ;
    score = score - 1 ;
  }
  if ( delta == score ) {
    delta = count * delta ;
  }
  score = count + score ;
  String msg = "empty input" ;
  int level = count + 1 ;
  if ( level == count ) {
    return count ;
  }
  score = level * score ;
  return 0 ;
}
